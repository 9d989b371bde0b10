"""Cochain complexes of pseudoalgebras, the graded bracket and Maurer-Cartan theory."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .hopf import HopfAlgebra
from .linalg import rank_sparse
from .pseudoalg import (
    LiePseudoalgebra,
    PolyMap,
    Representation,
    StructureError,
    permutation_sign,
    permuted_value,
    skew_complete,
)
from .report import Report
from .scalars import factorial_inverse
from .tensor import FreeModule, TensorElement, render, reindex, variable


@dataclass(frozen=True)
class Cochain0:
    """Degree-0 cochain: an element of k (x)_H M, stored as its coordinate vector."""

    module: FreeModule
    values: tuple

    def __bool__(self):
        return any(self.values)


def coboundary(theta, R: Representation):
    """The coboundary of a cochain with coefficients in R.

    Degree 0 uses ``(delta u)(x) = sum eps(g_i) f_i (x)_H u_i`` for
    ``x * u = sum (f_i (x) g_i) (x)_H u_i``; in higher degree the action terms
    carry the sign (-1)^i and the bracket terms (-1)^(i+j+1) (positions
    counted from 1), with legs returned to argument order.
    """
    L, M = R.algebra.module, R.module
    hopf = L.hopf
    rho, psi = R.algebra.bracket, R.action
    if isinstance(theta, Cochain0):
        entries = {}
        for i in range(L.rank):
            terms: dict = {}
            for a, ua in enumerate(theta.values):
                if not ua:
                    continue
                for ((f, g), b), c in psi.value((i, a)).terms.items():
                    e = hopf.counit_label(g)
                    if e:
                        terms[(f,), b] = terms.get(((f,), b), hopf.field.zero) + ua * c * e
            entries[(i,)] = TensorElement(M, 1, terms)
        return PolyMap((L,), M, entries, skew=True)
    n = theta.n
    if theta.sources != (L,) * n or theta.target != M:
        raise StructureError("cochain shape does not match the representation")
    entries = {}
    for t in itertools.combinations_with_replacement(range(L.rank), n + 1):
        xs = [variable(L, t[k], k) for k in range(n + 1)]
        total = M.zero(n + 1)
        for i in range(n + 1):
            inner = theta(*(xs[:i] + xs[i + 1 :]))
            val = psi(xs[i], inner).tensor
            total = total - val if i % 2 == 0 else total + val
        for i, j in itertools.combinations(range(n + 1), 2):
            rest = [x for k, x in enumerate(xs) if k != i and k != j]
            val = theta(rho(xs[i], xs[j]), *rest).tensor
            total = total - val if (i + j) % 2 == 0 else total + val
        entries[t] = total
    return skew_complete(L, M, entries, n + 1)


def stabilizer_project(value: TensorElement, t) -> TensorElement:
    """Sum of sgn(p) p.value over permutations p fixing the tuple t."""
    n = len(t)
    total = value.module.zero(n)
    for p in itertools.permutations(range(n)):
        if all(t[p[k]] == t[k] for k in range(n)):
            total = total + permuted_value(value, p)
    return total


def random_cochain(
    L: FreeModule,
    M: FreeModule,
    n: int,
    rng: random.Random,
    density: float = 0.6,
    coeffs=(-2, -1, 1, 2),
    max_degree: int = 1,
) -> PolyMap | Cochain0:
    """A random skew cochain of degree n; polynomial H uses monomials up to max_degree."""
    hopf = L.hopf
    field = hopf.field
    if n == 0:
        return Cochain0(M, tuple(field(rng.choice((0,) + tuple(coeffs))) for _ in range(M.rank)))
    labels = hopf.basis() or hopf.monomials(max_degree)
    entries = {}
    for t in itertools.combinations_with_replacement(range(L.rank), n):
        terms = {}
        for _ in range(3):
            if rng.random() < density:
                legs = tuple(rng.choice(labels) for _ in range(n))
                terms[legs, rng.randrange(M.rank)] = field(rng.choice(coeffs))
        entries[t] = stabilizer_project(TensorElement(M, n, terms), t)
    return skew_complete(L, M, entries, n)


class _Coordinates:
    """Assigns column numbers to (tuple, legs, index) keys."""

    def __init__(self):
        self.cols: dict = {}

    def vector(self, P) -> dict:
        out = {}
        if isinstance(P, Cochain0):
            for a, v in enumerate(P.values):
                if v:
                    out[self._col(("c0", a))] = v
            return out
        for t, T in P.table.items():
            for key, c in T.terms.items():
                out[self._col((t, key))] = c
        return out

    def _col(self, key):
        c = self.cols.get(key)
        if c is None:
            c = self.cols[key] = len(self.cols)
        return c


def cochain_spanning_set(L: FreeModule, M: FreeModule, n: int) -> list:
    """A spanning set of C^n(L, M) when H is finite dimensional."""
    hopf = L.hopf
    field = hopf.field
    if not hopf.is_finite:
        raise StructureError("cochain spaces are infinite dimensional for polynomial H")
    if n == 0:
        return [
            Cochain0(M, tuple(field.one if a == b else field.zero for a in range(M.rank)))
            for b in range(M.rank)
        ]
    out = []
    labels = hopf.basis()
    for t in itertools.combinations_with_replacement(range(L.rank), n):
        for legs in itertools.product(labels, repeat=n):
            for b in range(M.rank):
                v = stabilizer_project(TensorElement(M, n, {(legs, b): field.one}), t)
                if v:
                    out.append(skew_complete(L, M, {t: v}, n))
    return out


def cohomology_dim(R: Representation, n: int) -> int:
    """dim ker(delta_n) - dim im(delta_(n-1)) by exact rank computation."""
    L, M = R.algebra.module, R.module
    field = L.hopf.field
    if n < 0:
        raise ValueError("degree must be nonnegative")
    span_n = cochain_spanning_set(L, M, n)
    coords = _Coordinates()
    dim_c = rank_sparse([coords.vector(P) for P in span_n], field)
    out_coords = _Coordinates()
    rank_n = rank_sparse([out_coords.vector(coboundary(P, R)) for P in span_n], field)
    if n == 0:
        rank_prev = 0
    else:
        prev_coords = _Coordinates()
        rank_prev = rank_sparse(
            [prev_coords.vector(coboundary(P, R)) for P in cochain_spanning_set(L, M, n - 1)], field
        )
    return dim_c - rank_n - rank_prev


# ---------------------------------------------------------------------------
# graded bracket


def shuffles(p: int, q: int):
    """(p, q)-shuffles in lexicographic order, as (first block, second block, sign)."""
    for first in itertools.combinations(range(p + q), p):
        rest = tuple(k for k in range(p + q) if k not in first)
        yield first, rest, permutation_sign(first + rest)


def insertion(P: PolyMap, Q: PolyMap, t) -> TensorElement:
    """(i_P Q) on the basis tuple t, legs in argument order."""
    p, q = P.n, Q.n
    V = P.sources[0]
    xs = [variable(V, t[k], k) for k in range(len(t))]
    total = Q.target.zero(len(t))
    for first, rest, sign in shuffles(p, q - 1):
        inner = P(*(xs[k] for k in first))
        if not inner.tensor:
            continue
        val = Q(inner, *(xs[k] for k in rest)).tensor
        total = total + val if sign > 0 else total - val
    return total


def _check_insertable(P: PolyMap, Q: PolyMap):
    if P.n == 0 or Q.n == 0:
        raise StructureError("graded bracket needs arity >= 1")
    if P.sources[0] != Q.sources[0] or P.target != Q.sources[0] or Q.target != P.sources[0]:
        raise StructureError("graded bracket needs maps V^n -> V on one module")


def nr_bracket(P: PolyMap, Q: PolyMap) -> PolyMap:
    """[[P, Q]] = i_P Q - (-1)^((p-1)(q-1)) i_Q P for skew maps of arities p, q."""
    _check_insertable(P, Q)
    V = P.sources[0]
    N = P.n + Q.n - 1
    sign = -1 if (P.n - 1) * (Q.n - 1) % 2 == 0 else 1
    entries = {}
    for t in itertools.combinations_with_replacement(range(V.rank), N):
        a = insertion(P, Q, t)
        b = insertion(Q, P, t)
        entries[t] = a + b if sign > 0 else a - b
    return skew_complete(V, V, entries, N)


def nr_bracket_full(P: PolyMap, Q: PolyMap) -> PolyMap:
    """Same bracket evaluated on every tuple, without skew completion (for testing)."""
    _check_insertable(P, Q)
    V = P.sources[0]
    N = P.n + Q.n - 1
    sign = -1 if (P.n - 1) * (Q.n - 1) % 2 == 0 else 1
    entries = {}
    for t in itertools.product(range(V.rank), repeat=N):
        a = insertion(P, Q, t)
        b = insertion(Q, P, t)
        entries[t] = a + b if sign > 0 else a - b
    return PolyMap((V,) * N, V, entries, skew=True)


class GradedElement:
    """Finite sum of homogeneous skew maps V^n -> V, keyed by arity."""

    def __init__(self, parts=None):
        self.parts = {}
        for P in parts or ():
            self.add_part(P)

    def add_part(self, P: PolyMap):
        if P.n in self.parts:
            self.parts[P.n] = self.parts[P.n] + P
        else:
            self.parts[P.n] = P
        if not self.parts[P.n]:
            del self.parts[P.n]

    def __add__(self, other: GradedElement) -> GradedElement:
        return GradedElement(list(self.parts.values()) + list(other.parts.values()))

    def scale(self, c) -> GradedElement:
        return GradedElement([P.scale(c) for P in self.parts.values()])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def degree_part(self, n: int) -> PolyMap | None:
        return self.parts.get(n)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.parts == other.parts

    def __bool__(self):
        return bool(self.parts)


def graded_bracket(a: GradedElement, b: GradedElement) -> GradedElement:
    return GradedElement([nr_bracket(P, Q) for P in a.parts.values() for Q in b.parts.values()])


# ---------------------------------------------------------------------------
# the dgLa of a pair of pseudoalgebras


def direct_sum(L: FreeModule, M: FreeModule, name: str | None = None) -> FreeModule:
    """L (+) M with L's basis first; labels are prefixed only if they clash."""
    if L.hopf != M.hopf:
        raise StructureError("modules over different Hopf algebras")
    if set(L.basis) & set(M.basis):
        basis = [f"{L.name}.{b}" for b in L.basis] + [f"{M.name}.{b}" for b in M.basis]
    else:
        basis = list(L.basis) + list(M.basis)
    return FreeModule(name or f"{L.name}+{M.name}", basis, L.hopf)


class DgLa:
    """g = C_>(L (+) M, M) with d = [[rho_L + rho_M, -]], optionally twisted by an MC element."""

    def __init__(self, L: LiePseudoalgebra, M: LiePseudoalgebra, twist_by: PolyMap | None = None):
        if L.module == M.module:
            raise StructureError("L and M need distinct modules (rename one basis)")
        self.L, self.M = L, M
        self.V = direct_sum(L.module, M.module)
        self.nL = L.module.rank
        self.nM = M.module.rank
        self.rho = self.embed(L.bracket, target="L") + self.embed(M.bracket, target="M", shift_sources=True)
        self.twist_by = twist_by

    @property
    def hopf(self) -> HopfAlgebra:
        return self.V.hopf

    # coordinates ------------------------------------------------------
    def l_index(self, i):
        return i

    def m_index(self, a):
        return self.nL + a

    def slot_kind(self, v: int) -> str:
        return "L" if v < self.nL else "M"

    def embed(self, P: PolyMap, target: str = "M", shift_sources=None) -> PolyMap:
        """Transport a map on L/M slots to V^n -> V.

        Sources equal to L's module keep their indices, sources equal to M's
        module are shifted; ``shift_sources=True`` forces every source to M.
        """
        Lm, Mm = self.L.module, self.M.module
        offsets = []
        for s in P.sources:
            if shift_sources or (s == Mm and s != Lm):
                offsets.append(self.nL)
            elif s == Lm:
                offsets.append(0)
            else:
                raise StructureError(f"source {s.name} is neither L nor M")
        toff = 0 if target == "L" else self.nL
        mapping = [toff + i for i in range(P.target.rank)]
        table = {}
        for t, T in P.table.items():
            table[tuple(o + i for o, i in zip(offsets, t))] = reindex(T, self.V, mapping)
        # mixed maps such as psi: L (x) M -> M are completed skew-symmetrically on V
        if not table:
            return PolyMap((self.V,) * P.n, self.V, {}, True)
        return skew_complete(self.V, self.V, table, P.n)

    def restrict(self, P: PolyMap, slots) -> PolyMap:
        """Restrict a V-map to the given slot kinds (e.g. ("L", "M")), values read in M."""
        Lm, Mm = self.L.module, self.M.module
        mods = [Lm if s == "L" else Mm for s in slots]
        offs = [0 if s == "L" else self.nL for s in slots]
        mapping = [None] * self.nL + list(range(self.nM))
        table = {}
        for t in itertools.product(*(range(m.rank) for m in mods)):
            T = P.table.get(tuple(o + i for o, i in zip(offs, t)))
            if T is not None:
                table[t] = reindex(T, Mm, mapping)
        return PolyMap(mods, Mm, table, skew=all(s == slots[0] for s in slots))

    def bidegree(self, t) -> tuple:
        m = sum(1 for v in t if v < self.nL)
        return m, len(t) - m

    def components(self, P: PolyMap) -> set:
        return {self.bidegree(t) for t in P.table}

    def in_g(self, P: PolyMap) -> bool:
        """Values in M and vanishing on pure M-tuples."""
        for t, T in P.table.items():
            if self.bidegree(t)[0] == 0:
                return False
            if any(i < self.nL for (_, i) in T.terms):
                return False
        return True

    # structure ----------------------------------------------------------
    def bracket(self, P: PolyMap, Q: PolyMap) -> PolyMap:
        return nr_bracket(P, Q)

    def d(self, P: PolyMap) -> PolyMap:
        out = nr_bracket(self.rho, P)
        if self.twist_by is not None:
            out = out + nr_bracket(self.twist_by, P)
        return out

    def ad(self, beta: PolyMap, P: PolyMap) -> PolyMap:
        return nr_bracket(beta, P)

    def hom_basis(self) -> list:
        """A k-basis of g^0 = Hom_H(L, M) for finite H (images of the L basis)."""
        hopf = self.hopf
        if not hopf.is_finite:
            raise StructureError("Hom_H(L, M) is infinite dimensional over k for polynomial H")
        out = []
        for i in range(self.nL):
            for g in hopf.basis():
                for a in range(self.nM):
                    T = TensorElement(self.V, 1, {((g,), self.nL + a): hopf.field.one})
                    out.append(PolyMap((self.V,), self.V, {(i,): T}, skew=True))
        return out

    def hom_to_g0(self, images) -> PolyMap:
        """Embed phi in Hom_H(L, M) (images of L's basis in M) as a degree-0 element."""
        mapping = [self.nL + a for a in range(self.nM)]
        table = {(i,): reindex(T, self.V, mapping) for i, T in enumerate(images) if T}
        return PolyMap((self.V,), self.V, table, skew=True)

    def g0_to_hom(self, beta: PolyMap) -> list:
        mapping = [None] * self.nL + list(range(self.nM))
        return [reindex(beta.value((i,)), self.M.module, mapping) for i in range(self.nL)]

    def mc_residual(self, alpha: PolyMap) -> PolyMap:
        """d(alpha) + 1/2 [[alpha, alpha]]."""
        half = self.hopf.field.one / self.hopf.field(2)
        return self.d(alpha) + nr_bracket(alpha, alpha).scale(half)

    def check_mc(self, alpha: PolyMap) -> Report:
        rep = Report("mc-check")
        res = self.mc_residual(alpha)
        for t in sorted(res.table):
            if list(t) == sorted(t):
                m, n = self.bidegree(t)
                rep.fail(tuple(self.V.basis[i] for i in t), render(res.table[t]), f"C^{m},{n}")
        return rep

    def gauge_transform(self, alpha: PolyMap, beta: PolyMap) -> PolyMap:
        """e^{ad beta} alpha + g_beta with g_beta = -sum (ad beta)^n d(beta) / (n+1)!."""
        field = self.hopf.field
        out = alpha
        term = alpha
        n = 0
        while True:
            n += 1
            term = self.ad(beta, term)
            if not term:
                break
            out = out + term.scale(factorial_inverse(field, n))
        term = self.d(beta)
        n = 0
        while term:
            out = out - term.scale(factorial_inverse(field, n + 1))
            n += 1
            term = self.ad(beta, term)
        return out

    def twist(self, alpha: PolyMap) -> DgLa:
        if not self.check_mc(alpha).ok:
            raise StructureError("twisting element is not Maurer-Cartan")
        total = alpha if self.twist_by is None else self.twist_by + alpha
        return DgLa(self.L, self.M, total)


def build_dgla(L: LiePseudoalgebra, M: LiePseudoalgebra) -> DgLa:
    return DgLa(L, M)


def closure_holds(dgla: DgLa, f: PolyMap, g: PolyMap) -> bool:
    """[[C^{m,n}, C^{p,q}]] lies in C^{m+p, n+q-1} for homogeneous f, g."""
    cf, cg = dgla.components(f), dgla.components(g)
    if len(cf) > 1 or len(cg) > 1:
        raise ValueError("closure test needs homogeneous components")
    if not cf or not cg:
        return not dgla.bracket(f, g)
    (m, n), (p, q) = next(iter(cf)), next(iter(cg))
    return dgla.components(dgla.bracket(f, g)) <= {(m + p, n + q - 1)}


def component(dgla: DgLa, P: PolyMap, m: int, n: int) -> PolyMap:
    table = {t: T for t, T in P.table.items() if dgla.bidegree(t) == (m, n)}
    return PolyMap(P.sources, P.target, table, P.skew)


def random_g_element(dgla: DgLa, m: int, n: int, rng: random.Random, coeffs=(-2, -1, 1, 2), max_degree=1) -> PolyMap:
    """A random element of C^{m,n}."""
    V = dgla.V
    hopf = V.hopf
    labels = hopf.basis() or hopf.monomials(max_degree)
    entries = {}
    ls = range(dgla.nL)
    ms = range(dgla.nL, dgla.nL + dgla.nM)
    for lt in itertools.combinations_with_replacement(ls, m):
        for mt in itertools.combinations_with_replacement(ms, n):
            t = lt + mt
            terms = {}
            for _ in range(2):
                if rng.random() < 0.6:
                    legs = tuple(rng.choice(labels) for _ in range(m + n))
                    terms[legs, dgla.nL + rng.randrange(dgla.nM)] = hopf.field(rng.choice(coeffs))
            v = stabilizer_project(TensorElement(V, m + n, terms), t)
            if v:
                entries[t] = v
    return skew_complete(V, V, entries, m + n) if entries else PolyMap((V,) * (m + n), V, {}, True)


def embed_cochain(dgla: DgLa, theta: PolyMap) -> PolyMap:
    """theta in C^n(L, M) as an element of C^{n,0}."""
    return dgla.embed(theta, target="M")
