"""Exact dynamics of rational maps of the complex projective plane."""

from .blowup import blow_up, exceptional_image, is_resolved, lift_map, resolve_at
from .curves import ParamCurve, PlaneCurve, implicitize, line, map_image, multiplicity_at
from .exact.gaussian import GaussianRational
from .maps import builtin_map, load_map_file, parse_map_text, parse_poly, resolve_map
from .mpoly import MPoly, gcd, resultant, substitute
from .orbits import forward_orbit, infinite_preorbit_certificate, nf_set, preorbit_tree
from .projmap import (ProjectiveMap, ProjectivePoint, collapsed_curves, critical_locus, degree_sequence,
                      indeterminacy, is_algebraically_stable_up_to, is_finite_at, iterate, point,
                      preimages, restrict_to_line, topological_degree)
from .verify import phi_pipeline, psi_pipeline, rotation_membership, verify_theorem

__version__ = "0.1.0"
