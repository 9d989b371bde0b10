"""Non-abelian 2-cocycles and the extensions they classify."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cohomology import DgLa
from .linalg import solve_sparse
from .pseudoalg import (
    LiePseudoalgebra,
    ModuleMap,
    PolyMap,
    StructureError,
    check_homomorphism,
    check_jacobi,
    check_skew,
    skew_complete,
)
from .report import Report
from .tensor import FreeModule, Labeled, TensorElement, apply_to_target, reindex, render, variable


@dataclass(frozen=True)
class NonAbelianCocycle:
    chi: PolyMap  # L (x) L -> H^2 (x)_H M, skew
    psi: PolyMap  # L (x) M -> H^2 (x)_H M

    def __add__(self, other):
        return NonAbelianCocycle(self.chi + other.chi, self.psi + other.psi)

    def __sub__(self, other):
        return NonAbelianCocycle(self.chi - other.chi, self.psi - other.psi)

    def scale(self, c):
        return NonAbelianCocycle(self.chi.scale(c), self.psi.scale(c))

    def differences(self, other) -> list:
        return [("chi",) + d for d in self.chi.differences(other.chi)] + [
            ("psi",) + d for d in self.psi.differences(other.psi)
        ]


def zero_cocycle(L: LiePseudoalgebra, M: LiePseudoalgebra) -> NonAbelianCocycle:
    Lm, Mm = L.module, M.module
    return NonAbelianCocycle(PolyMap((Lm, Lm), Mm, {}, skew=True), PolyMap((Lm, Mm), Mm, {}))


def _phi_var(phi: ModuleMap, i: int, label) -> Labeled:
    return Labeled((label,), phi.images[i])


# ---------------------------------------------------------------------------
# cocycle identities


def derivation_residual(c, M: LiePseudoalgebra, i, a, b) -> TensorElement:
    """[psi(x,u) * v] - psi(x, [u*v]) + [u * psi(x,v)]."""
    psi, mu = c.psi, M.bracket
    x = variable(psi.sources[0], i, 0)
    u, v = variable(M.module, a, 1), variable(M.module, b, 2)
    return mu(psi(x, u), v).tensor - psi(x, mu(u, v)).tensor + mu(u, psi(x, v)).tensor


def representation_residual(c, L: LiePseudoalgebra, M: LiePseudoalgebra, i, j, a) -> TensorElement:
    """psi(x, psi(y,u)) - psi(y, psi(x,u)) - psi([x*y], u) - [chi(x,y) * u]."""
    psi, chi = c.psi, c.chi
    x, y = variable(L.module, i, 0), variable(L.module, j, 1)
    u = variable(M.module, a, 2)
    return (
        psi(x, psi(y, u)).tensor
        - psi(y, psi(x, u)).tensor
        - psi(L.bracket(x, y), u).tensor
        - M.bracket(chi(x, y), u).tensor
    )


def cocycle_residual(c, L: LiePseudoalgebra, i, j, k) -> TensorElement:
    """Left side of the six-term identity for chi."""
    psi, chi, rho = c.psi, c.chi, L.bracket
    x, y, z = (variable(L.module, n, lab) for n, lab in ((i, 0), (j, 1), (k, 2)))
    return (
        psi(x, chi(y, z)).tensor
        - psi(y, chi(x, z)).tensor
        + psi(z, chi(x, y)).tensor
        + chi(x, rho(y, z)).tensor
        - chi(y, rho(x, z)).tensor
        + chi(z, rho(x, y)).tensor
    )


def _check_shapes(c, L, M):
    Lm, Mm = L.module, M.module
    if c.chi.sources != (Lm, Lm) or c.chi.target != Mm:
        raise StructureError("chi must be a map L (x) L -> H^2 (x)_H M")
    if c.psi.sources != (Lm, Mm) or c.psi.target != Mm:
        raise StructureError("psi must be a map L (x) M -> H^2 (x)_H M")


def check_nonabelian_cocycle(c: NonAbelianCocycle, L: LiePseudoalgebra, M: LiePseudoalgebra) -> Report:
    _check_shapes(c, L, M)
    rep = Report("check-cocycle")
    rep.extend(check_skew(c.chi), "chi skew")
    Lm, Mm = L.module, M.module
    nl, nm = range(Lm.rank), range(Mm.rank)
    for i, a, b in itertools.product(nl, nm, nm):
        d = derivation_residual(c, M, i, a, b)
        if d:
            rep.fail((Lm.basis[i], Mm.basis[a], Mm.basis[b]), render(d), "derivation")
    for i, j, a in itertools.product(nl, nl, nm):
        d = representation_residual(c, L, M, i, j, a)
        if d:
            rep.fail((Lm.basis[i], Lm.basis[j], Mm.basis[a]), render(d), "action")
    for i, j, k in itertools.product(nl, repeat=3):
        d = cocycle_residual(c, L, i, j, k)
        if d:
            rep.fail((Lm.basis[i], Lm.basis[j], Lm.basis[k]), render(d), "six-term")
    return rep


# ---------------------------------------------------------------------------
# extensions on L (+) M


class ExtensionModel:
    """A pseudoalgebra structure on L (+) M with the canonical inclusion and projection."""

    def __init__(self, L: LiePseudoalgebra, M: LiePseudoalgebra, bracket: PolyMap):
        self.layout = DgLa(L, M)
        self.L, self.M = L, M
        self.V = self.layout.V
        if bracket.sources != (self.V, self.V) or bracket.target != self.V:
            raise StructureError("extension bracket must live on L (+) M")
        self.algebra = LiePseudoalgebra(self.V, bracket, f"{L.name}+{M.name}")

    @property
    def bracket(self) -> PolyMap:
        return self.algebra.bracket

    @property
    def nL(self):
        return self.layout.nL

    def inclusion(self) -> ModuleMap:
        return ModuleMap(self.M.module, self.V, [self.V.vector(self.nL + a) for a in range(self.M.module.rank)])

    def projection(self) -> ModuleMap:
        mapping = list(range(self.nL)) + [None] * self.M.module.rank
        return ModuleMap(self.V, self.L.module, [reindex(self.V.vector(k), self.L.module, mapping) for k in range(self.V.rank)])

    def section(self, phi: ModuleMap | None = None) -> ModuleMap:
        """s(x) = (x, phi(x)); phi = 0 gives the canonical section."""
        images = []
        for i in range(self.nL):
            im = self.V.vector(i)
            if phi is not None:
                im = im + reindex(phi.images[i], self.V, [self.nL + a for a in range(self.M.module.rank)])
            images.append(im)
        return ModuleMap(self.L.module, self.V, images)

    def to_M(self, T: TensorElement) -> TensorElement:
        if any(i < self.nL for (_, i) in T.terms):
            raise StructureError("value has a component outside M")
        return reindex(T, self.M.module, [None] * self.nL + list(range(self.M.module.rank)))

    def validate(self) -> Report:
        rep = Report("check-extension")
        rep.extend(check_skew(self.bracket), "skew")
        rep.extend(check_jacobi(self.algebra), "jacobi")
        rep.extend(check_homomorphism(self.inclusion(), self.M, self.algebra), "inclusion")
        rep.extend(check_homomorphism(self.projection(), self.algebra, self.L), "projection")
        return rep


def extension_bracket(c: NonAbelianCocycle, layout: DgLa) -> PolyMap:
    """[(x,u)*(y,v)] = ([x*y], psi(x,v) - sigma psi(y,u) + chi(x,y) + [u*v])."""
    return layout.rho + layout.embed(c.chi) + layout.embed(c.psi)


def build_extension(c: NonAbelianCocycle, L: LiePseudoalgebra, M: LiePseudoalgebra, validate: bool = True) -> ExtensionModel:
    if validate:
        rep = check_nonabelian_cocycle(c, L, M)
        if not rep.ok:
            raise StructureError("not a non-abelian 2-cocycle:\n" + rep.render())
    layout = DgLa(L, M)
    return ExtensionModel(L, M, extension_bracket(c, layout))


def extract_cocycle(E: ExtensionModel, phi_s: ModuleMap | None = None) -> NonAbelianCocycle:
    """chi(x,y) = [s x * s y] - (id (x) s)[x*y],  psi(x,u) = [s x * u]."""
    s = E.section(phi_s)
    Lm, Mm = E.L.module, E.M.module
    chi, psi = {}, {}
    for i, j in itertools.product(range(Lm.rank), repeat=2):
        val = E.bracket.on(s.images[i], s.images[j]) - s(E.L.bracket.value((i, j)))
        chi[(i, j)] = E.to_M(val)
    for i, a in itertools.product(range(Lm.rank), range(Mm.rank)):
        psi[(i, a)] = E.to_M(E.bracket.on(s.images[i], E.V.vector(E.nL + a)))
    return NonAbelianCocycle(PolyMap((Lm, Lm), Mm, chi, skew=True), PolyMap((Lm, Mm), Mm, psi))


# ---------------------------------------------------------------------------
# equivalence


def equivalence_rhs(c: NonAbelianCocycle, L: LiePseudoalgebra, M: LiePseudoalgebra, phi: ModuleMap):
    """The maps (x,u) -> [phi x * u] and
    (x,y) -> psi(x, phi y) - sigma psi(y, phi x) - phi[x*y] + [phi x * phi y]."""
    Lm, Mm = L.module, M.module
    mu, psi = M.bracket, c.psi
    r1, r2 = {}, {}
    for i, a in itertools.product(range(Lm.rank), range(Mm.rank)):
        r1[(i, a)] = mu(_phi_var(phi, i, 0), variable(Mm, a, 1)).tensor
    for i, j in itertools.product(range(Lm.rank), repeat=2):
        x, y = variable(Lm, i, 0), variable(Lm, j, 1)
        px, py = _phi_var(phi, i, 0), _phi_var(phi, j, 1)
        val = (
            psi(x, py).tensor
            - psi(y, px).tensor
            - apply_to_target(L.bracket.value((i, j)), phi.images, Mm)
            + mu(px, py).tensor
        )
        r2[(i, j)] = val
    return PolyMap((Lm, Mm), Mm, r1), PolyMap((Lm, Lm), Mm, r2)


def equivalence_residual(c, c2, L, M, phi: ModuleMap):
    """(psi - psi2 - [phi x * u], chi - chi2 - rhs(psi2, phi)); zero iff c ~ c2 via phi."""
    r1, r2 = equivalence_rhs(c2, L, M, phi)
    return c.psi - c2.psi - r1, c.chi - c2.chi - r2


def check_cocycle_equivalence(c, c2, phi: ModuleMap, L: LiePseudoalgebra, M: LiePseudoalgebra) -> Report:
    """psi - psi' = [phi x * u] and chi - chi' = psi'(x, phi y) - sigma psi'(y, phi x) - phi[x*y] + [phi x * phi y]."""
    rep = Report("equiv")
    e1, e2 = equivalence_residual(c, c2, L, M, phi)
    for loc, d in e1.differences(PolyMap(e1.sources, e1.target, {})):
        rep.fail(loc, d, "psi")
    for loc, d in e2.differences(PolyMap(e2.sources, e2.target, {})):
        rep.fail(loc, d, "chi")
    return rep


def apply_equivalence(c: NonAbelianCocycle, phi: ModuleMap, L, M) -> NonAbelianCocycle:
    """The cocycle c' with c' ~ c via phi (c' in the unprimed role)."""
    r1, r2 = equivalence_rhs(c, L, M, phi)
    return NonAbelianCocycle(c.chi + r2, c.psi + r1)


@dataclass
class SearchConfig:
    """How find_equivalence looks for phi.

    mode: "auto", "exhaustive", "linear" or "bounded".  ``coefficients`` is the
    coefficient set of the bounded mode, ``degree`` bounds monomials for
    polynomial H, ``limit`` caps the number of exhaustive candidates.  The auto
    mode enumerates when at most ``auto_limit`` candidates exist, then falls
    back to the linear solve (abelian M) or the bounded search.
    """

    mode: str = "auto"
    coefficients: tuple = (-1, 0, 1)
    degree: int = 2
    limit: int = 200_000
    auto_limit: int = 3125

    @classmethod
    def parse(cls, text: str | None) -> SearchConfig:
        if not text:
            return cls()
        if text in ("auto", "exhaustive", "linear"):
            return cls(mode=text)
        if text.startswith("bounded"):
            _, _, rest = text.partition(":")
            coeffs = tuple(int(v) if "/" not in v else v for v in rest.replace("{", "").replace("}", "").split(",") if v.strip()) if rest else (-1, 0, 1)
            return cls(mode="bounded", coefficients=coeffs)
        raise ValueError(f"unknown search mode {text!r}")


@dataclass
class EquivalenceResult:
    status: str  # "found", "not-equivalent" or "inconclusive"
    phi: ModuleMap | None = None
    searched: int = 0
    mode: str = ""
    notes: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "found"


def hom_basis(L: FreeModule, M: FreeModule, degree: int = 2) -> list:
    """Maps e_i -> h e_a for basis labels h (monomials of bounded degree for polynomial H)."""
    hopf = L.hopf
    labels = hopf.basis() if hopf.is_finite else hopf.monomials(degree)
    out = []
    for i in range(L.rank):
        for h in labels:
            for a in range(M.rank):
                images = [M.zero() for _ in range(L.rank)]
                images[i] = M.vector(a, hopf.basis_element(h))
                out.append(ModuleMap(L, M, images))
    return out


def combine(basis: list, coeffs, L: FreeModule, M: FreeModule) -> ModuleMap:
    images = [M.zero() for _ in range(L.rank)]
    for c, phi in zip(coeffs, basis):
        if c:
            images = [a + b.scale(c) for a, b in zip(images, phi.images)]
    return ModuleMap(L, M, images)


def _vector(P: PolyMap, tag, cols: dict) -> dict:
    out = {}
    for t, T in P.table.items():
        for key, c in T.terms.items():
            col = cols.setdefault((tag, t, key), len(cols))
            out[col] = c
    return out


def _linear_solve(c, c2, L, M, basis):
    field_ = L.hopf.field
    zero = ModuleMap.zero(L.module, M.module)
    base = equivalence_residual(c, c2, L, M, zero)
    cols: dict = {}
    b = {}
    for tag, P in zip("12", base):
        b.update(_vector(P, tag, cols))
    columns = []
    for phi in basis:
        r = equivalence_residual(c, c2, L, M, phi)
        v = {}
        for tag, P, P0 in zip("12", r, base):
            v.update(_vector(P - P0, tag, cols))
        columns.append(v)
    # rows indexed by coordinates: sum_k a_k col_k = -b
    rows = [dict() for _ in range(len(cols))]
    for k, v in enumerate(columns):
        for r, val in v.items():
            rows[r][k] = val
    rhs = [-b.get(r, field_.zero) for r in range(len(cols))]
    return solve_sparse(rows, rhs, len(basis), field_)


def find_equivalence(c, c2, L: LiePseudoalgebra, M: LiePseudoalgebra, search: SearchConfig | None = None) -> EquivalenceResult:
    """Look for phi with c ~ c2 via phi.

    "not-equivalent" is only reported when the search covered every phi:
    exhaustive enumeration over F_p with finite H, or an exact linear solve
    over the full Hom space (abelian M, finite H).
    """
    search = search or SearchConfig()
    hopf = L.hopf
    fld = hopf.field
    finite_space = hopf.is_finite and fld.is_finite
    nvars = L.module.rank * (hopf.dimension or 0) * M.module.rank
    mode = search.mode
    if mode == "auto":
        if finite_space and fld.p**nvars <= min(search.limit, search.auto_limit):
            mode = "exhaustive"
        elif M.is_abelian:
            mode = "linear"
        else:
            mode = "bounded"
    zero = ModuleMap.zero(L.module, M.module)
    if check_cocycle_equivalence(c, c2, zero, L, M).ok:
        return EquivalenceResult("found", zero, 1, mode)
    basis = hom_basis(L.module, M.module, search.degree)

    if mode == "linear":
        if not M.is_abelian:
            return EquivalenceResult("inconclusive", None, 0, mode, ["linear mode needs abelian M"])
        sol = _linear_solve(c, c2, L, M, basis)
        if sol is not None:
            phi = combine(basis, sol, L.module, M.module)
            if check_cocycle_equivalence(c, c2, phi, L, M).ok:
                return EquivalenceResult("found", phi, 1, mode)
            raise AssertionError("linear solution failed verification")
        if hopf.is_finite:
            return EquivalenceResult("not-equivalent", None, 1, mode, ["linear system has no solution"])
        return EquivalenceResult(
            "inconclusive", None, 1, mode, [f"no solution among maps of degree <= {search.degree}"]
        )

    if mode == "exhaustive":
        if not finite_space:
            return EquivalenceResult("inconclusive", None, 0, mode, ["exhaustive search needs F_p and finite H"])
        total = fld.p ** len(basis)
        if total > search.limit:
            return EquivalenceResult("inconclusive", None, 0, mode, [f"{total} candidates exceed the limit"])
        values = range(fld.p)
    else:
        values = [fld(v) for v in search.coefficients]
        values = list(dict.fromkeys(values))
        total = len(values) ** len(basis)
        if total > search.limit:
            return EquivalenceResult("inconclusive", None, 0, mode, [f"{total} candidates exceed the limit"])
    count = 0
    for coeffs in itertools.product(values, repeat=len(basis)):
        count += 1
        phi = combine(basis, [fld(v) for v in coeffs], L.module, M.module)
        if check_cocycle_equivalence(c, c2, phi, L, M).ok:
            return EquivalenceResult("found", phi, count, mode)
    covers_all = finite_space and (mode == "exhaustive" or len(set(values)) == fld.p)
    if covers_all:
        return EquivalenceResult("not-equivalent", None, count, mode, [f"exhaustive over {count} candidates"])
    return EquivalenceResult("inconclusive", None, count, mode, [f"no witness among {count} candidates"])


def equivalence_map(E: ExtensionModel, E2: ExtensionModel, phi: ModuleMap) -> ModuleMap:
    """Theta(x, u) = (x, phi(x) + u) from E to E2."""
    V2 = E2.V
    shift = [E2.nL + a for a in range(E2.M.module.rank)]
    images = []
    for i in range(E.nL):
        images.append(V2.vector(i) + reindex(phi.images[i], V2, shift))
    for a in range(E.M.module.rank):
        images.append(V2.vector(E2.nL + a))
    return ModuleMap(E.V, V2, images)


def check_extension_equivalence(E: ExtensionModel, E2: ExtensionModel, theta: ModuleMap) -> Report:
    rep = Report("extension-equivalence")
    if theta.source != E.V or theta.target != E2.V:
        rep.fail((), "shape mismatch")
        return rep
    rep.extend(check_homomorphism(theta, E.algebra, E2.algebra), "homomorphism")
    incl = theta.compose(E.inclusion())
    if incl != E2.inclusion():
        rep.fail((), "Theta does not restrict to the identity on M", "inclusion")
    if E2.projection().compose(theta) != E.projection():
        rep.fail((), "Theta does not cover the identity on L", "projection")
    return rep


# ---------------------------------------------------------------------------
# Maurer-Cartan dictionary


def cocycle_as_mc(c: NonAbelianCocycle, dgla: DgLa) -> PolyMap:
    """chi in C^{2,0} plus psi in C^{1,1}."""
    return dgla.embed(c.chi) + dgla.embed(c.psi)


def mc_as_cocycle(alpha: PolyMap, dgla: DgLa) -> NonAbelianCocycle:
    chi = dgla.restrict(alpha, ("L", "L"))
    psi = dgla.restrict(alpha, ("L", "M"))
    return NonAbelianCocycle(PolyMap(chi.sources, chi.target, chi.table, skew=True), psi)


def section_difference(phi_s: ModuleMap, phi_s2: ModuleMap) -> ModuleMap:
    return phi_s - phi_s2


def random_cocycle_candidate(L: LiePseudoalgebra, M: LiePseudoalgebra, rng, density=0.4, coeffs=None) -> NonAbelianCocycle:
    """Random skew chi and sparse psi (not necessarily a cocycle), finite H only."""
    hopf = L.hopf
    fld = hopf.field
    labels = hopf.basis() or hopf.monomials(1)
    coeffs = coeffs or [v for v in range(-2, 3) if v]
    Lm, Mm = L.module, M.module
    chi = {}
    for i, j in itertools.combinations(range(Lm.rank), 2):
        terms = {}
        for _ in range(2):
            if rng.random() < density:
                terms[(rng.choice(labels), rng.choice(labels)), rng.randrange(Mm.rank)] = fld(rng.choice(coeffs))
        chi[(i, j)] = TensorElement(Mm, 2, terms)
    psi = {}
    for i, a in itertools.product(range(Lm.rank), range(Mm.rank)):
        terms = {}
        if rng.random() < density:
            terms[(rng.choice(labels), rng.choice(labels)), rng.randrange(Mm.rank)] = fld(rng.choice(coeffs))
        psi[(i, a)] = TensorElement(Mm, 2, terms)
    return NonAbelianCocycle(skew_complete(Lm, Mm, chi, 2), PolyMap((Lm, Mm), Mm, psi))
