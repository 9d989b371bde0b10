"""Automorphisms of extensions: restriction/projection, the Wells obstruction and lifts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .linalg import solve_sparse
from .cohomology import coboundary
from .nonabelian import (
    EquivalenceResult,
    ExtensionModel,
    NonAbelianCocycle,
    SearchConfig,
    check_cocycle_equivalence,
    extract_cocycle,
    find_equivalence,
    hom_basis,
    combine,
)
from .pseudoalg import (
    LiePseudoalgebra,
    ModuleMap,
    PolyMap,
    Representation,
    StructureError,
    check_homomorphism,
    is_automorphism,
)
from .report import Report
from .tensor import FreeModule, reindex


@dataclass(frozen=True)
class AutPair:
    beta: ModuleMap  # automorphism of M
    alpha: ModuleMap  # automorphism of L

    def key(self):
        return (tuple(self.beta.images), tuple(self.alpha.images))

    def __eq__(self, other):
        return isinstance(other, AutPair) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def compose(self, other: AutPair) -> AutPair:
        """(beta, alpha)(beta', alpha') = (beta beta', alpha alpha')."""
        return AutPair(self.beta.compose(other.beta), self.alpha.compose(other.alpha))

    def render(self) -> str:
        return f"beta: {self.beta.render()}; alpha: {self.alpha.render()}"


def make_pair(beta: ModuleMap, alpha: ModuleMap, L: LiePseudoalgebra, M: LiePseudoalgebra) -> AutPair:
    if not is_automorphism(beta, M):
        raise StructureError("beta is not an automorphism of M")
    if not is_automorphism(alpha, L):
        raise StructureError("alpha is not an automorphism of L")
    return AutPair(beta, alpha)


def identity_pair(L: LiePseudoalgebra, M: LiePseudoalgebra) -> AutPair:
    return AutPair(ModuleMap.identity(M.module), ModuleMap.identity(L.module))


# ---------------------------------------------------------------------------
# tau


def preserves_M(E: ExtensionModel, gamma: ModuleMap) -> bool:
    return all(i >= E.nL for a in range(E.M.module.rank) for (_, i) in gamma.images[E.nL + a].terms)


def restrict_to_M(E: ExtensionModel, gamma: ModuleMap) -> ModuleMap:
    if not preserves_M(E, gamma):
        raise StructureError("gamma does not preserve M")
    return ModuleMap(E.M.module, E.M.module, [E.to_M(gamma.images[E.nL + a]) for a in range(E.M.module.rank)])


def tau(E: ExtensionModel, gamma: ModuleMap, phi_s: ModuleMap | None = None) -> AutPair:
    """(gamma restricted to M, p gamma s)."""
    beta = restrict_to_M(E, gamma)
    alpha = E.projection().compose(gamma).compose(E.section(phi_s))
    return AutPair(beta, alpha)


def shear(E: ExtensionModel, phi: ModuleMap) -> ModuleMap:
    """(x, u) -> (x, phi(x) + u)."""
    shift = [E.nL + a for a in range(E.M.module.rank)]
    images = [E.V.vector(i) + reindex(phi.images[i], E.V, shift) for i in range(E.nL)]
    images += [E.V.vector(E.nL + a) for a in range(E.M.module.rank)]
    return ModuleMap(E.V, E.V, images)


# ---------------------------------------------------------------------------
# transformed cocycle and the obstruction


def transform_cocycle(c: NonAbelianCocycle, pair: AutPair) -> NonAbelianCocycle:
    """chi'(x,y) = beta chi(a^-1 x, a^-1 y),  psi'(x,u) = beta psi(a^-1 x, b^-1 u)."""
    ainv = pair.alpha.inverse()
    binv = pair.beta.inverse()
    if ainv is None or binv is None:
        raise StructureError("pair is not invertible")
    Lm, Mm = pair.alpha.source, pair.beta.source
    chi, psi = {}, {}
    for i, j in itertools.product(range(Lm.rank), repeat=2):
        chi[(i, j)] = pair.beta(c.chi.on(ainv.images[i], ainv.images[j]))
    for i, a in itertools.product(range(Lm.rank), range(Mm.rank)):
        psi[(i, a)] = pair.beta(c.psi.on(ainv.images[i], binv.images[a]))
    return NonAbelianCocycle(PolyMap((Lm, Lm), Mm, chi, skew=True), PolyMap((Lm, Mm), Mm, psi))


@dataclass
class WellsResult:
    status: str  # "zero", "nonzero" or "inconclusive"
    phi: ModuleMap | None
    equivalence: EquivalenceResult
    transformed: NonAbelianCocycle
    cocycle: NonAbelianCocycle


def wells_obstruction(E: ExtensionModel, pair: AutPair, phi_s: ModuleMap | None = None, search: SearchConfig | None = None) -> WellsResult:
    c = extract_cocycle(E, phi_s)
    ct = transform_cocycle(c, pair)
    res = find_equivalence(ct, c, E.L, E.M, search)
    status = {"found": "zero", "not-equivalent": "nonzero"}.get(res.status, "inconclusive")
    return WellsResult(status, res.phi, res, ct, c)


def construct_lift(E: ExtensionModel, pair: AutPair, phi: ModuleMap, phi_s: ModuleMap | None = None) -> ModuleMap:
    """gamma(u) = beta(u), gamma(s x) = s(alpha x) + phi(alpha x), verified from scratch."""
    c = extract_cocycle(E, phi_s)
    if not check_cocycle_equivalence(transform_cocycle(c, pair), c, phi, E.L, E.M).ok:
        raise StructureError("phi does not witness the vanishing of the obstruction")
    s = E.section(phi_s)
    shift = [E.nL + a for a in range(E.M.module.rank)]
    to_V = lambda T: reindex(T, E.V, shift)  # noqa: E731
    phis = phi_s or ModuleMap.zero(E.L.module, E.M.module)
    images = []
    for i in range(E.nL):
        ax = pair.alpha.images[i]
        img = s(ax) + to_V(phi(ax)) - to_V(pair.beta(phis.images[i]))
        images.append(img)
    images += [to_V(pair.beta.images[a]) for a in range(E.M.module.rank)]
    gamma = ModuleMap(E.V, E.V, images)
    if not is_automorphism(gamma, E.algebra):
        raise AssertionError("constructed lift is not an automorphism")
    if tau(E, gamma, phi_s) != pair:
        raise AssertionError("constructed lift does not restrict to the pair")
    return gamma


@dataclass
class InducibilityResult:
    status: str  # "inducible", "not-inducible" or "inconclusive"
    gamma: ModuleMap | None
    wells: WellsResult

    @property
    def verdict(self) -> str:
        return {"inducible": "found", "not-inducible": "not-found"}.get(self.status, "inconclusive")


def check_inducible(E: ExtensionModel, pair: AutPair, search: SearchConfig | None = None, phi_s: ModuleMap | None = None) -> InducibilityResult:
    w = wells_obstruction(E, pair, phi_s, search)
    if w.status == "zero":
        return InducibilityResult("inducible", construct_lift(E, pair, w.phi, phi_s), w)
    if w.status == "nonzero":
        return InducibilityResult("not-inducible", None, w)
    return InducibilityResult("inconclusive", None, w)


# ---------------------------------------------------------------------------
# enumeration over F_p with H = k


def _require_enumerable(module: FreeModule):
    hopf = module.hopf
    if hopf.kind != "trivial" or not hopf.field.is_finite:
        raise StructureError("automorphism groups are only enumerated for H = F_p")


def _matrices(field_, rows: int, cols: int):
    for flat in itertools.product(range(field_.p), repeat=rows * cols):
        yield [[field_(flat[r * cols + c]) for c in range(cols)] for r in range(rows)]


def _det(m, field_):
    n = len(m)
    if n == 0:
        return field_.one
    if n == 1:
        return m[0][0]
    total = field_.zero
    for c in range(n):
        minor = [row[:c] + row[c + 1 :] for row in m[1:]]
        term = m[0][c] * _det(minor, field_)
        total = total + term if c % 2 == 0 else total - term
    return total


def general_linear(module: FreeModule) -> list:
    """All invertible k-linear maps of a free module over H = F_p."""
    _require_enumerable(module)
    fld = module.hopf.field
    n = module.rank
    return [
        ModuleMap.from_matrix(module, module, m) for m in _matrices(fld, n, n) if _det(m, fld)
    ]


def automorphisms(A: LiePseudoalgebra) -> list:
    return [g for g in general_linear(A.module) if check_homomorphism(g, A, A).ok]


def structure_constants(bracket: PolyMap):
    """Integer array c[i, j, k] of a bracket over H = F_p."""
    import numpy as np

    V = bracket.target
    n = V.rank
    c = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), T in bracket.table.items():
        for (_, k), v in T.terms.items():
            c[i, j, k] = int(v)
    return c


def _homomorphism_mask(gammas, c, p):
    """Vectorized [g x, g y] = g [x, y] for a stack of matrices g[k, row, col] mod p."""
    import numpy as np

    lhs = np.einsum("zai,zbj,abm->zijm", gammas, gammas, c, optimize=True) % p
    rhs = np.einsum("ijl,zml->zijm", c, gammas, optimize=True) % p
    return (lhs == rhs).all(axis=(1, 2, 3))


def automorphisms_preserving_M(E: ExtensionModel) -> list:
    """Aut_M(E): block lower-triangular automorphisms, by full enumeration.

    Candidates are filtered with a vectorized structure-constant test.
    """
    import numpy as np

    _require_enumerable(E.V)
    fld = E.V.hopf.field
    p = fld.p
    nL, nM = E.nL, E.M.module.rank
    n = nL + nM
    blocks_A = [m for m in _matrices(fld, nL, nL) if _det(m, fld)]
    blocks_B = [m for m in _matrices(fld, nM, nM) if _det(m, fld)]
    blocks_C = list(_matrices(fld, nM, nL))
    cands = np.zeros((len(blocks_A) * len(blocks_B) * len(blocks_C), n, n), dtype=np.int64)
    z = 0
    for A, B, C in itertools.product(blocks_A, blocks_B, blocks_C):
        # column j holds the image of basis vector j
        cands[z, :nL, :nL] = [[int(v) for v in row] for row in A]
        cands[z, nL:, nL:] = [[int(v) for v in row] for row in B]
        cands[z, nL:, :nL] = [[int(v) for v in row] for row in C]
        z += 1
    mask = _homomorphism_mask(cands, structure_constants(E.bracket), p)
    out = []
    for g in cands[mask]:
        gamma = ModuleMap.from_matrix(E.V, E.V, [[fld(int(v)) for v in row] for row in g])
        out.append(gamma)
    return out


def check_exact_sequence(E: ExtensionModel, phi_s: ModuleMap | None = None, search: SearchConfig | None = None, gammas=None, pairs=None) -> Report:
    """ker tau = Aut_M^{M,L}(E) and im tau = ker W.

    Whichever of ``gammas``/``pairs`` is omitted gets enumerated (H = F_p only).
    The inclusion ker W in im tau is only asserted when gammas were enumerated.
    Without ``search`` the obstruction is decided by the exact linear solve
    when M is abelian, which is complete for finite H.
    """
    rep = Report("exact-seq")
    L, M = E.L, E.M
    if search is None and M.is_abelian:
        search = SearchConfig(mode="linear")
    enumerate_all = gammas is None
    if gammas is None:
        gammas = automorphisms_preserving_M(E)
    if pairs is None:
        pairs = [AutPair(b, a) for b in automorphisms(M) for a in automorphisms(L)]
    ident = identity_pair(L, M)
    images = set()
    kernel = 0
    for g in gammas:
        p = tau(E, g, phi_s)
        images.add(p)
        is_shear = all(
            g.images[E.nL + a] == E.V.vector(E.nL + a) for a in range(M.module.rank)
        ) and E.projection().compose(g) == E.projection()
        if (p == ident) != is_shear:
            rep.fail(("kernel",), g.render(), "tau(gamma) = id does not match the shear shape")
        kernel += p == ident
    # every homomorphic shear is in the kernel
    if enumerate_all:
        shears = 0
        for phi in _all_homs(L.module, M.module):
            g = shear(E, phi)
            if check_homomorphism(g, E.algebra, E.algebra).ok:
                shears += 1
                if tau(E, g, phi_s) != ident:
                    rep.fail(("kernel",), g.render(), "shear with tau != id")
        if shears != kernel:
            rep.fail(("kernel",), f"{shears} shears vs {kernel} kernel elements")
    for p in sorted(images, key=lambda q: str(q.key())):
        w = wells_obstruction(E, p, phi_s, search)
        if w.status != "zero":
            rep.fail(("image",), p.render(), f"W = {w.status} on an induced pair")
    ker_w = 0
    for p in pairs:
        w = wells_obstruction(E, p, phi_s, search)
        if w.status == "zero":
            ker_w += 1
            try:
                construct_lift(E, p, w.phi, phi_s)
            except (AssertionError, StructureError) as exc:
                rep.fail(("lift",), p.render(), str(exc))
            if enumerate_all and p not in images:
                rep.fail(("image",), p.render(), "W = 0 but not in the image of tau")
        elif w.status == "nonzero" and p in images:
            rep.fail(("image",), p.render(), "induced pair with W != 0")
    rep.messages.append(
        f"{len(gammas)} automorphisms preserving M, kernel of tau has {kernel} elements, "
        f"image of tau has {len(images)} pairs, kernel of W has {ker_w} of {len(pairs)} pairs"
    )
    return rep


def _all_homs(L: FreeModule, M: FreeModule):
    fld = L.hopf.field
    basis = hom_basis(L, M)
    for coeffs in itertools.product(range(fld.p), repeat=len(basis)):
        yield combine(basis, [fld(v) for v in coeffs], L, M)


def check_crossed_homomorphism(c: NonAbelianCocycle, p: AutPair, q: AutPair) -> bool:
    """The pair action is an action: transforming by q then p equals transforming by pq.

    For abelian M this is the cochain-level identity
    W(pq) = p.W(q) + W(p) with W(p) = c_p - c.
    """
    lhs = transform_cocycle(transform_cocycle(c, q), p)
    rhs = transform_cocycle(c, p.compose(q))
    return lhs == rhs


# ---------------------------------------------------------------------------
# abelian specialization


def check_C_psi(pair: AutPair, psi: PolyMap) -> bool:
    """beta psi(x, u) = psi(alpha x, beta u) on basis pairs."""
    Lm, Mm = psi.sources
    for i, a in itertools.product(range(Lm.rank), range(Mm.rank)):
        lhs = pair.beta(psi.value((i, a)))
        rhs = psi.on(pair.alpha.images[i], pair.beta.images[a])
        if lhs != rhs:
            return False
    return True


@dataclass
class AbelianWellsResult:
    zero: bool
    difference: PolyMap
    witness: ModuleMap | None  # eta with delta(eta) = difference
    notes: list = field(default_factory=list)


def abelian_wells(E: ExtensionModel, pair: AutPair, phi_s: ModuleMap | None = None) -> AbelianWellsResult:
    """Decide whether chi_(beta,alpha) - chi is a coboundary by an exact linear solve."""
    if not E.M.is_abelian:
        raise StructureError("abelian Wells map needs an abelian kernel")
    c = extract_cocycle(E, phi_s)
    if not check_C_psi(pair, c.psi):
        raise StructureError("pair is outside C_psi")
    hopf = E.V.hopf
    if not hopf.is_finite:
        raise StructureError("linear solve needs finite-dimensional H; use find_equivalence")
    R = Representation(E.L, E.M.module, c.psi)
    diff = transform_cocycle(c, pair).chi - c.chi
    basis = hom_basis(E.L.module, E.M.module)
    cols: dict = {}

    def vec(P):
        out = {}
        for t, T in P.table.items():
            for key, v in T.terms.items():
                out[cols.setdefault((t, key), len(cols))] = v
        return out

    target = vec(diff)
    columns = [vec(coboundary(_as_cochain(phi), R)) for phi in basis]
    rows = [dict() for _ in range(len(cols))]
    for k, v in enumerate(columns):
        for r, val in v.items():
            rows[r][k] = val
    rhs = [target.get(r, hopf.field.zero) for r in range(len(cols))]
    sol = solve_sparse(rows, rhs, len(basis), hopf.field)
    if sol is None:
        return AbelianWellsResult(False, diff, None)
    eta = combine(basis, sol, E.L.module, E.M.module)
    assert coboundary(_as_cochain(eta), R) == diff
    return AbelianWellsResult(True, diff, eta)


def _as_cochain(phi: ModuleMap) -> PolyMap:
    return PolyMap((phi.source,), phi.target, {(i,): im for i, im in enumerate(phi.images)}, skew=True)
