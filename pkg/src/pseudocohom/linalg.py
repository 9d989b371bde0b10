"""Exact Gaussian elimination over Q or F_p.

Matrices are lists of rows; entries are field elements of a ScalarField.
Sparse rows (dicts column -> value) are used for the larger systems that come
from cochain spaces.
"""

from __future__ import annotations

from .scalars import ScalarField


def _reduce_sparse(rows, field: ScalarField):
    """Row-reduce sparse rows in place; returns pivot map col -> normalized row."""
    pivots: dict = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            col = min(r)
            if col in pivots:
                prow = pivots[col]
                f = r[col]
                for c, v in prow.items():
                    nv = r.get(c, field.zero) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
                continue
            inv = field.one / r[col]
            r = {c: v * inv for c, v in r.items()}
            # keep stored pivot rows fully reduced against later pivots lazily
            pivots[col] = r
            break
    return pivots


def rank_sparse(rows, field: ScalarField) -> int:
    return len(_reduce_sparse(rows, field))


def rank(matrix, field: ScalarField) -> int:
    return rank_sparse([{j: v for j, v in enumerate(row) if v} for row in matrix], field)


def rref(matrix, field: ScalarField):
    """Reduced row echelon form and pivot columns."""
    m = [[field(v) for v in row] for row in matrix]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(matrix, field: ScalarField, ncols: int | None = None):
    """Basis of {v : matrix v = 0}."""
    if not matrix:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    red, pivots = rref(matrix, field)
    n = len(matrix[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(matrix, rhs, field: ScalarField):
    """One solution x of matrix x = rhs, or None when inconsistent."""
    if not matrix:
        return None if any(rhs) else []
    n = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, field)
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def solve_sparse(rows, rhs, nvars: int, field: ScalarField):
    """Sparse variant of :func:`solve`; rows are dicts column -> value."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[nvars] = field(b)
        aug.append(r)
    pivots = _reduce_sparse(aug, field)
    if nvars in pivots:
        return None
    # back substitution from the highest pivot down
    x = [field.zero] * nvars
    for col in sorted(pivots, reverse=True):
        row = pivots[col]
        val = row.get(nvars, field.zero)
        for c, v in row.items():
            if c != col and c != nvars:
                val = val - v * x[c]
        x[col] = val
    return x


def mat_mul(a, b, field: ScalarField):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), field.zero) for j in range(len(b[0]))] for i in range(len(a))]


def inverse(matrix, field: ScalarField):
    """Inverse of a square matrix, or None when singular."""
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(red) < n:
        return None
    return [row[n:] for row in red]
