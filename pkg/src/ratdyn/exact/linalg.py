"""Small dense linear algebra over Q(i), used for minimal polynomials and joins."""

from __future__ import annotations

from .gaussian import GaussianRational, ZERO, ONE


def first_dependency(vectors: list[list[GaussianRational]]) -> list[GaussianRational] | None:
    """Coefficients ``c`` with ``sum c_k v_k = 0`` and ``c_last = 1``.

    Vectors are added one at a time; the first one that lies in the span of
    its predecessors determines the relation.  Returns None if all are
    independent.
    """
    basis: list[tuple[int, list, list]] = []  # (pivot, reduced vector, combination)
    for k, v in enumerate(vectors):
        vec = list(v)
        comb = [ZERO] * len(vectors)
        comb[k] = ONE
        for pivot, bvec, bcomb in basis:
            c = vec[pivot]
            if c.is_zero():
                continue
            vec = [a - c * b for a, b in zip(vec, bvec)]
            comb = [a - c * b for a, b in zip(comb, bcomb)]
        pivot = next((j for j, c in enumerate(vec) if not c.is_zero()), None)
        if pivot is None:
            return comb[:k + 1]
        inv = vec[pivot].inverse()
        basis.append((pivot, [a * inv for a in vec], [a * inv for a in comb]))
    return None


def solve(columns: list[list[GaussianRational]], rhs: list[GaussianRational]) -> list[GaussianRational]:
    """Solve ``sum x_k columns[k] = rhs`` for a square nonsingular system."""
    n = len(rhs)
    rows = [[columns[k][i] for k in range(n)] + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular linear system")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [a * inv for a in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def det(matrix: list[list]) -> GaussianRational:
    """Determinant by Gaussian elimination over Q(i)."""
    m = [[GaussianRational.coerce(x) for x in row] for row in matrix]
    n = len(m)
    d = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        d = d * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return d


def inverse(matrix: list[list]) -> list[list[GaussianRational]]:
    n = len(matrix)
    cols = [[GaussianRational.coerce(matrix[i][k]) for i in range(n)] for k in range(n)]
    out = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        out.append(solve(cols, e))
    # out[j] is column j of the inverse
    return [[out[j][i] for j in range(n)] for i in range(n)]
