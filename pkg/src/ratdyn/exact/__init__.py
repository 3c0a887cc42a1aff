"""Exact Gaussian-rational arithmetic, intervals, root isolation and number fields."""
