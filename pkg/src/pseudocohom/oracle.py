"""Classical Lie algebra computations used to cross-check the pseudoalgebra code at H = k.

The first half of this module works with plain structure constants and
alternating multilinear maps and imports nothing from the package except the
scalar fields.  The second half is the comparison harness: it transports data
between the two worlds and reports disagreements.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .scalars import ScalarField


class OracleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# classical objects


def _sort_sign(idx):
    """(sign, sorted tuple) of an index tuple; sign 0 when an index repeats."""
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, None
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return sign, tuple(idx)


def _perm_sign(perm) -> int:
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


@dataclass
class ClassicalLieAlgebra:
    """Structure constants c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k."""

    field: ScalarField
    dim: int
    c: list

    @classmethod
    def from_constants(cls, field: ScalarField, dim: int, constants: dict) -> ClassicalLieAlgebra:
        """``constants[(i, j)] = {k: value}``, completed by antisymmetry."""
        zero = field(0)
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), row in constants.items():
            for k, v in row.items():
                v = field(v)
                if i == j and v:
                    raise OracleError(f"[e{i}, e{i}] must vanish")
                c[i][j][k] = v
                c[j][i][k] = -v
        return cls(field, dim, c)

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(
            self.c[i][j][k] == -self.c[j][i][k]
            for i in range(n) for j in range(n) for k in range(n)
        )

    def bracket(self, u, v):
        """Bracket of coordinate vectors."""
        n = self.dim
        out = [self.field(0)] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                w = u[i] * v[j]
                for k in range(n):
                    if self.c[i][j][k]:
                        out[k] = out[k] + w * self.c[i][j][k]
        return out

    def unit(self, i):
        return [self.field(1) if k == i else self.field(0) for k in range(self.dim)]

    def jacobiator(self, i, j, k):
        """[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]."""
        e = self.unit
        parts = (
            self.bracket(self.bracket(e(i), e(j)), e(k)),
            self.bracket(self.bracket(e(j), e(k)), e(i)),
            self.bracket(self.bracket(e(k), e(i)), e(j)),
        )
        return [a + b + d for a, b, d in zip(*parts)]

    def jacobi_failures(self) -> list:
        n = self.dim
        return [t for t in itertools.product(range(n), repeat=3) if any(self.jacobiator(*t))]

    def is_lie(self) -> bool:
        return self.is_antisymmetric() and not self.jacobi_failures()


@dataclass
class ClassicalRep:
    """rho[i][a][b]: coefficient of v_a in e_i . v_b."""

    algebra: ClassicalLieAlgebra
    dim: int
    rho: list

    @classmethod
    def adjoint(cls, g: ClassicalLieAlgebra) -> ClassicalRep:
        n = g.dim
        return cls(g, n, [[[g.c[i][b][a] for b in range(n)] for a in range(n)] for i in range(n)])

    @classmethod
    def trivial(cls, g: ClassicalLieAlgebra, dim: int = 1) -> ClassicalRep:
        z = g.field(0)
        return cls(g, dim, [[[z] * dim for _ in range(dim)] for _ in range(g.dim)])

    def act(self, x, v):
        out = [self.algebra.field(0)] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for b, vb in enumerate(v):
                if not vb:
                    continue
                for a in range(self.dim):
                    if self.rho[i][a][b]:
                        out[a] = out[a] + xi * vb * self.rho[i][a][b]
        return out

    def is_representation(self) -> bool:
        g = self.algebra
        for i, j in itertools.product(range(g.dim), repeat=2):
            for b in range(self.dim):
                v = [g.field(1) if k == b else g.field(0) for k in range(self.dim)]
                lhs = self.act(g.unit(i), self.act(g.unit(j), v))
                lhs = [p - q for p, q in zip(lhs, self.act(g.unit(j), self.act(g.unit(i), v)))]
                if lhs != self.act(g.bracket(g.unit(i), g.unit(j)), v):
                    return False
        return True


class AlternatingMap:
    """An alternating n-linear map k^d x ... x k^d -> k^m, stored on increasing index tuples."""

    def __init__(self, field: ScalarField, d: int, m: int, n: int, values: dict | None = None):
        self.field, self.d, self.m, self.n = field, d, m, n
        self.values = {}
        for t, v in (values or {}).items():
            if any(v):
                self.values[tuple(t)] = list(v)

    def on_basis(self, idx):
        sign, key = _sort_sign(idx)
        zero = [self.field(0)] * self.m
        if sign == 0 or key not in self.values:
            return zero
        v = self.values[key]
        return v if sign > 0 else [-a for a in v]

    def __call__(self, *vectors):
        """Multilinear evaluation on coordinate vectors."""
        out = [self.field(0)] * self.m
        supports = [[(k, a) for k, a in enumerate(v) if a] for v in vectors]
        for choice in itertools.product(*supports):
            w = self.field(1)
            for _, a in choice:
                w = w * a
            val = self.on_basis([k for k, _ in choice])
            out = [o + w * x for o, x in zip(out, val)]
        return out

    def __eq__(self, other):
        return isinstance(other, AlternatingMap) and (self.n, self.m, self.values) == (other.n, other.m, other.values)

    def scaled(self, s):
        return AlternatingMap(self.field, self.d, self.m, self.n, {t: [s * a for a in v] for t, v in self.values.items()})


def ce_coboundary(theta: AlternatingMap, rep: ClassicalRep) -> AlternatingMap:
    """Textbook Chevalley-Eilenberg differential.

    (d theta)(x_0..x_n) = sum_i (-1)^i x_i . theta(.. x_i omitted ..)
                        + sum_{i<j} (-1)^(i+j) theta([x_i, x_j], .. x_i, x_j omitted ..)
    """
    g = rep.algebra
    n = theta.n
    values = {}
    for t in itertools.combinations(range(g.dim), n + 1):
        xs = [g.unit(k) for k in t]
        total = [g.field(0)] * rep.dim
        for i in range(n + 1):
            val = rep.act(xs[i], theta(*(xs[:i] + xs[i + 1 :])))
            s = 1 if i % 2 == 0 else -1
            total = [a + s * b for a, b in zip(total, val)]
        for i, j in itertools.combinations(range(n + 1), 2):
            rest = [x for k, x in enumerate(xs) if k not in (i, j)]
            val = theta(g.bracket(xs[i], xs[j]), *rest)
            s = 1 if (i + j) % 2 == 0 else -1
            total = [a + s * b for a, b in zip(total, val)]
        values[t] = total
    return AlternatingMap(g.field, g.dim, rep.dim, n + 1, values)


def pseudo_normalization(n: int) -> int:
    """Sign relating the pseudoalgebra coboundary on C^n to the textbook one.

    The pseudoalgebra differential counts the action term at the first slot
    with a minus sign; on C^0 it is x . u, the textbook value.
    """
    return 1 if n == 0 else -1


def ce_matrix(rep: ClassicalRep, n: int):
    """Matrix of the textbook differential C^n -> C^(n+1) in the basis (increasing tuple, coordinate)."""
    g = rep.algebra
    cols = [(t, a) for t in itertools.combinations(range(g.dim), n) for a in range(rep.dim)]
    rows = [(t, a) for t in itertools.combinations(range(g.dim), n + 1) for a in range(rep.dim)]
    zero = g.field(0)
    mat = [[zero] * len(cols) for _ in rows]
    row_index = {r: k for k, r in enumerate(rows)}
    for c, (t, a) in enumerate(cols):
        v = [g.field(1) if b == a else zero for b in range(rep.dim)]
        d = ce_coboundary(AlternatingMap(g.field, g.dim, rep.dim, n, {t: v}), rep)
        for s, vec in d.values.items():
            for b, x in enumerate(vec):
                mat[row_index[(s, b)]][c] = x
    return rows, cols, mat


def _rank(mat, field: ScalarField) -> int:
    m = [list(r) for r in mat]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field(1) / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def ce_cohomology_dim(rep: ClassicalRep, n: int) -> int:
    g = rep.algebra
    dim_c = math.comb(g.dim, n) * rep.dim
    rank_n = _rank(ce_matrix(rep, n)[2], g.field) if dim_c else 0
    rank_prev = _rank(ce_matrix(rep, n - 1)[2], g.field) if n > 0 else 0
    return dim_c - rank_n - rank_prev


def classical_insertion(P: AlternatingMap, Q: AlternatingMap) -> AlternatingMap:
    """(i_P Q)(x_1..x_N) = 1/(p!(q-1)!) sum_sigma sgn(sigma) Q(P(x_s1..x_sp), x_s(p+1)..)."""
    p, q = P.n, Q.n
    N = p + q - 1
    field = P.field
    norm = field(1) / field(math.factorial(p) * math.factorial(q - 1))
    values = {}
    for t in itertools.combinations(range(P.d), N):
        total = [field(0)] * Q.m
        for perm in itertools.permutations(range(N)):
            args = [t[perm[k]] for k in range(N)]
            inner = P.on_basis(args[:p])
            if not any(inner):
                continue
            rest = [[field(1) if a == b else field(0) for a in range(P.d)] for b in args[p:]]
            val = Q(inner, *rest)
            s = _perm_sign(perm)
            total = [a + s * b for a, b in zip(total, val)]
        values[t] = [norm * a for a in total]
    return AlternatingMap(field, P.d, Q.m, N, values)


def classical_nr(P: AlternatingMap, Q: AlternatingMap) -> AlternatingMap:
    """[P, Q] = i_P Q - (-1)^((p-1)(q-1)) i_Q P for maps V^n -> V."""
    if P.d != P.m or Q.d != Q.m or P.d != Q.d:
        raise OracleError("NR bracket needs maps V^n -> V on one space")
    a = classical_insertion(P, Q)
    b = classical_insertion(Q, P)
    s = -1 if (P.n - 1) * (Q.n - 1) % 2 == 0 else 1
    keys = set(a.values) | set(b.values)
    zero = [P.field(0)] * P.m
    return AlternatingMap(
        P.field, P.d, P.m, a.n,
        {t: [x + s * y for x, y in zip(a.values.get(t, zero), b.values.get(t, zero))] for t in keys},
    )


# ---------------------------------------------------------------------------
# classical extensions and inducibility

# Candidate matrices are processed in blocks to bound memory.
_CHUNK = 1 << 16
MAX_CANDIDATES = 5 ** 9


def _np():
    import numpy as np

    return np


def _as_int_array(g: ClassicalLieAlgebra):
    np = _np()
    return np.array([[[int(x) for x in row] for row in plane] for plane in g.c], dtype=np.int64)


def classical_inducibility(E: ClassicalLieAlgebra, n_l: int, beta, alpha) -> dict:
    """Decide whether (beta, alpha) lifts to an automorphism of E over F_p.

    E has basis e_0..e_(n_l - 1) spanning a complement of M and the remaining
    basis vectors spanning M, with the section x -> x.  ``beta`` and
    ``alpha`` are integer matrices (column j = image of basis vector j).  Every
    linear map of E is enumerated; the automorphisms gamma with
    gamma|_M = beta and p gamma s = alpha are returned.
    """
    np = _np()
    p = E.field.characteristic
    if p == 0:
        raise OracleError("enumeration needs a finite field")
    n = E.dim
    total = p ** (n * n)
    if total > MAX_CANDIDATES:
        raise OracleError(f"{total} candidate matrices exceeds the limit {MAX_CANDIDATES}")
    n_m = n - n_l
    beta = np.array(beta, dtype=np.int64) % p
    alpha = np.array(alpha, dtype=np.int64) % p
    if beta.shape != (n_m, n_m) or alpha.shape != (n_l, n_l):
        raise OracleError("pair has the wrong shape")
    c = _as_int_array(E).astype(np.int32)
    found = []
    automorphisms = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = np.empty((len(idx), n * n), dtype=np.int32)
        rest = idx.copy()
        for k in range(n * n - 1, -1, -1):
            digits[:, k] = rest % p
            rest //= p
        gam = digits.reshape(len(idx), n, n)
        # automorphism test: [g e_i, g e_j] = g [e_i, e_j]
        lhs = np.einsum("zai,zbj,abm->zijm", gam, gam, c, optimize=True) % p
        rhs = np.einsum("ijl,zml->zijm", c, gam, optimize=True) % p
        hom = (lhs == rhs).all(axis=(1, 2, 3))
        inv = np.round(np.linalg.det(gam.astype(float))).astype(np.int64) % p != 0
        auto = hom & inv
        automorphisms += int(auto.sum())
        # tau(gamma) = (beta, alpha): M is preserved with restriction beta, and
        # the L-block of gamma on the section equals alpha.
        keep = (gam[:, :n_l, n_l:] == 0).all(axis=(1, 2))
        keep &= (gam[:, n_l:, n_l:] == beta).all(axis=(1, 2))
        keep &= (gam[:, :n_l, :n_l] == alpha).all(axis=(1, 2))
        for g in gam[auto & keep]:
            found.append(g.tolist())
    return {
        "inducible": bool(found),
        "lifts": found,
        "candidates": total,
        "automorphisms": automorphisms,
    }


def extension_constants(field: ScalarField, L: ClassicalLieAlgebra, M: ClassicalLieAlgebra, chi: dict, psi: dict) -> ClassicalLieAlgebra:
    """Bracket on L + M: [x, y] = [x, y]_L + chi(x, y), [x, u] = psi(x, u), [u, v] = [u, v]_M.

    ``chi[(i, j)]`` and ``psi[(i, a)]`` are coordinate vectors in M.
    """
    nl, nm = L.dim, M.dim
    consts: dict = {}
    for i, j in itertools.combinations(range(nl), 2):
        row = {k: L.c[i][j][k] for k in range(nl) if L.c[i][j][k]}
        for a, v in enumerate(chi.get((i, j), [])):
            if v:
                row[nl + a] = v
        consts[(i, j)] = row
    for i, a in itertools.product(range(nl), range(nm)):
        consts[(i, nl + a)] = {nl + b: v for b, v in enumerate(psi.get((i, a), [])) if v}
    for a, b in itertools.combinations(range(nm), 2):
        consts[(nl + a, nl + b)] = {nl + k: M.c[a][b][k] for k in range(nm) if M.c[a][b][k]}
    return ClassicalLieAlgebra.from_constants(field, nl + nm, consts)


# ---------------------------------------------------------------------------
# comparison harness


def _pseudo_module(field, basis, name):
    from . import hopf as hopf_mod
    from .tensor import FreeModule

    return FreeModule(name, list(basis), hopf_mod.trivial(field))


def to_pseudo_algebra(g: ClassicalLieAlgebra, name: str = "g"):
    from .pseudoalg import LiePseudoalgebra, bracket_from_constants

    module = _pseudo_module(g.field, [f"e{k}" for k in range(g.dim)], name)
    consts = {}
    for i, j in itertools.combinations(range(g.dim), 2):
        row = {k: g.c[i][j][k] for k in range(g.dim) if g.c[i][j][k]}
        if row:
            consts[(i, j)] = row
    return LiePseudoalgebra(module, bracket_from_constants(module, consts), name)


def to_pseudo_rep(rep: ClassicalRep, A, name: str = "V"):
    from .pseudoalg import PolyMap, Representation
    from .tensor import TensorElement

    module = _pseudo_module(rep.algebra.field, [f"v{k}" for k in range(rep.dim)], name)
    table = {}
    for i, b in itertools.product(range(rep.algebra.dim), range(rep.dim)):
        terms = {(((), ()), a): rep.rho[i][a][b] for a in range(rep.dim) if rep.rho[i][a][b]}
        table[(i, b)] = TensorElement(module, 2, terms)
    return Representation(A, module, PolyMap((A.module, module), module, table))


def from_pseudo_algebra(A) -> ClassicalLieAlgebra:
    """Structure constants of a pseudoalgebra over H = k."""
    if A.module.hopf.kind != "trivial":
        raise OracleError("classical comparison needs H = k")
    n = A.module.rank
    field = A.module.hopf.field
    zero = field(0)
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        for (_, k), v in A.bracket.value((i, j)).terms.items():
            c[i][j][k] = c[i][j][k] + v
    return ClassicalLieAlgebra(field, n, c)


def cochain_to_classical(P, d: int) -> AlternatingMap:
    field = P.target.hopf.field
    values = {}
    for t in itertools.combinations(range(d), P.n):
        v = [field(0)] * P.target.rank
        for (_, k), x in P.value(t).terms.items():
            v[k] = v[k] + x
        values[t] = v
    return AlternatingMap(field, d, P.target.rank, P.n, values)


def cochain_to_pseudo(theta: AlternatingMap, source, target):
    from .pseudoalg import skew_complete
    from .tensor import TensorElement

    legs = ((),) * theta.n
    entries = {
        t: TensorElement(target, theta.n, {(legs, k): x for k, x in enumerate(v) if x})
        for t, v in theta.values.items()
    }
    return skew_complete(source, target, entries, theta.n)


def _pseudo_matrix(R, n: int, rows, cols):
    from .cohomology import Cochain0, coboundary

    L, M = R.algebra.module, R.module
    field = L.hopf.field
    d = L.rank
    zero = field(0)
    row_index = {r: k for k, r in enumerate(rows)}
    mat = [[zero] * len(cols) for _ in rows]
    for c, (t, a) in enumerate(cols):
        if n == 0:
            theta = Cochain0(M, tuple(field(1) if b == a else zero for b in range(M.rank)))
        else:
            v = [field(1) if b == a else zero for b in range(M.rank)]
            theta = cochain_to_pseudo(AlternatingMap(field, d, M.rank, n, {t: v}), L, M)
        image = cochain_to_classical(coboundary(theta, R), d)
        for s, vec in image.values.items():
            for b, x in enumerate(vec):
                mat[row_index[(s, b)]][c] = x
    return mat


def compare_with_pseudo(g: ClassicalLieAlgebra, rep: ClassicalRep | None = None, degree: int = 3, nr_samples: int = 0, seed: int = 0):
    """Compare coboundary matrices (and optionally NR brackets) between the two implementations."""
    from .cohomology import nr_bracket
    from .report import Report

    report = Report("oracle-compare")
    rep = rep or ClassicalRep.adjoint(g)
    A = to_pseudo_algebra(g)
    R = to_pseudo_rep(rep, A)
    max_n = min(degree, g.dim)
    for n in range(0, max_n + 1):
        rows, cols, ce = ce_matrix(rep, n)
        s = pseudo_normalization(n)
        ce = [[s * x for x in row] for row in ce]
        ps = _pseudo_matrix(R, n, rows, cols)
        for r, (row_ce, row_ps) in enumerate(zip(ce, ps)):
            for c, (x, y) in enumerate(zip(row_ce, row_ps)):
                if x != y:
                    report.fail((f"delta_{n}", str(rows[r]), str(cols[c])), f"{y} vs {x}")
        report.messages.append(f"delta on C^{n}: {len(rows)}x{len(cols)} matrices compared")
    if nr_samples:
        rng = random.Random(seed)
        for k in range(nr_samples):
            p, q = rng.randint(1, 2), rng.randint(1, 2)
            P = random_alternating(g.field, g.dim, g.dim, p, rng)
            Q = random_alternating(g.field, g.dim, g.dim, q, rng)
            classical = classical_nr(P, Q)
            pseudo = cochain_to_classical(
                nr_bracket(cochain_to_pseudo(P, A.module, A.module), cochain_to_pseudo(Q, A.module, A.module)),
                g.dim,
            )
            if classical != pseudo:
                report.fail(("nr", str(k)), f"arities ({p}, {q}) disagree")
        report.messages.append(f"{nr_samples} random NR brackets compared")
    return report


def random_alternating(field: ScalarField, d: int, m: int, n: int, rng: random.Random, density: float = 0.6) -> AlternatingMap:
    values = {}
    for t in itertools.combinations(range(d), n):
        values[t] = [field(rng.randint(-2, 2)) if rng.random() < density else field(0) for _ in range(m)]
    return AlternatingMap(field, d, m, n, values)


def random_skew_table(field: ScalarField, dim: int, rng: random.Random, density: float = 0.3) -> ClassicalLieAlgebra:
    """Antisymmetric constants, not necessarily satisfying Jacobi."""
    consts = {}
    for i, j in itertools.combinations(range(dim), 2):
        consts[(i, j)] = {k: rng.randrange(field.characteristic or 5) for k in range(dim) if rng.random() < density}
    return ClassicalLieAlgebra.from_constants(field, dim, consts)


def compare_jacobi(g: ClassicalLieAlgebra):
    """(classical failures, pseudo failure locators) for one table; equal sets expected."""
    from .pseudoalg import check_jacobi

    A = to_pseudo_algebra(g)
    report = check_jacobi(A)
    pseudo = sorted({tuple(A.module.index(x) for x in f.locator) for f in report.findings})
    return sorted(g.jacobi_failures()), pseudo
