"""Lie H-pseudoalgebras, representations and H-linear maps on free modules."""

from __future__ import annotations

import itertools
from math import comb

from .hopf import HopfAlgebra, HopfElement, PolynomialHopf
from .linalg import inverse as matrix_inverse
from .report import Report
from .tensor import (
    FreeModule,
    Labeled,
    TensorElement,
    TensorError,
    apply_to_target,
    permute_legs,
    render,
    substitute,
    variable,
)


class StructureError(ValueError):
    pass


def permutation_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def inverse_permutation(perm) -> tuple:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return tuple(inv)


class PolyMap:
    """H^{(x)n}-polylinear map L_1 (x) ... (x) L_n -> H^{(x)n} (x)_H M.

    ``table`` maps basis index tuples to tensors with n legs; missing tuples
    are zero.
    """

    def __init__(self, sources, target: FreeModule, table=None, skew: bool = False):
        self.sources = tuple(sources)
        self.target = target
        self.n = len(self.sources)
        self.skew = skew
        if skew and any(s != self.sources[0] for s in self.sources):
            raise StructureError("skew maps need equal sources")
        clean = {}
        for key, v in (table or {}).items():
            key = tuple(key)
            if len(key) != self.n or any(not 0 <= k < s.rank for k, s in zip(key, self.sources)):
                raise StructureError(f"bad basis tuple {key} for arity {self.n}")
            if v.n != self.n:
                raise StructureError(f"value at {key} has {v.n} legs, expected {self.n}")
            if v.module != target:
                raise StructureError(f"value at {key} does not live in {target.name}")
            if v:
                clean[key] = v
        self.table = clean

    @property
    def hopf(self) -> HopfAlgebra:
        return self.target.hopf

    def value(self, idx) -> TensorElement:
        v = self.table.get(tuple(idx))
        return v if v is not None else self.target.zero(self.n)

    def __call__(self, *args: Labeled) -> Labeled:
        if len(args) != self.n:
            raise StructureError(f"expected {self.n} arguments, got {len(args)}")
        for a, s in zip(args, self.sources):
            if a.tensor.module != s:
                raise TensorError(f"argument in {a.tensor.module.name}, expected {s.name}")
        return substitute(self.table.get, args, self.target)

    def on(self, *elements: TensorElement) -> TensorElement:
        """Evaluate on plain module elements (arity-1 tensors), legs in argument order."""
        args = [Labeled((k,), e) for k, e in enumerate(elements)]
        return self(*args).tensor

    def tuples(self):
        return itertools.product(*(range(s.rank) for s in self.sources))

    def locator(self, idx) -> tuple:
        return tuple(s.basis[i] for s, i in zip(self.sources, idx))

    def _like(self, table, skew=None) -> PolyMap:
        return PolyMap(self.sources, self.target, table, self.skew if skew is None else skew)

    def __add__(self, other: PolyMap) -> PolyMap:
        self._check(other)
        out = dict(self.table)
        for k, v in other.table.items():
            out[k] = out[k] + v if k in out else v
        return self._like(out, self.skew and other.skew)

    def __neg__(self):
        return self._like({k: -v for k, v in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> PolyMap:
        return self._like({k: v.scale(c) for k, v in self.table.items()})

    __rmul__ = scale

    def _check(self, other: PolyMap):
        if self.sources != other.sources or self.target != other.target:
            raise StructureError("polylinear maps with different shapes")

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.sources == other.sources and self.target == other.target and self.table == other.table

    def __hash__(self):
        return hash((self.n, frozenset(self.table.items())))

    def __bool__(self):
        return bool(self.table)

    def differences(self, other: PolyMap) -> list:
        """Locators and rendered differences where the tables disagree."""
        out = []
        for k in sorted(set(self.table) | set(other.table)):
            d = self.value(k) - other.value(k)
            if d:
                out.append((self.locator(k), render(d)))
        return out

    def render_table(self) -> dict:
        return {" ".join(self.locator(k)): render(v) for k, v in sorted(self.table.items())}

    def __repr__(self):
        return f"PolyMap(arity={self.n}, target={self.target.name}, {self.render_table()})"


def zero_map(sources, target: FreeModule, skew: bool = False) -> PolyMap:
    return PolyMap(sources, target, {}, skew)


def permuted_value(value: TensorElement, perm) -> TensorElement:
    """Value on the tuple ``(t[perm[0]], ..., t[perm[n-1]])`` of a skew map from its value on t."""
    v = permute_legs(inverse_permutation(perm), value)
    return -v if permutation_sign(perm) < 0 else v


def skew_complete(module: FreeModule, target: FreeModule, entries: dict, n: int | None = None) -> PolyMap:
    """Fill a skew table from representative entries.

    Raises StructureError when two entries (or a stabilizer of a repeated
    tuple) demand different values.
    """
    if n is None:
        if not entries:
            raise StructureError("arity needed for an empty table")
        n = len(next(iter(entries)))
    table: dict = {}
    perms = list(itertools.permutations(range(n)))
    for t, v in sorted(entries.items()):
        t = tuple(t)
        for p in perms:
            t2 = tuple(t[p[k]] for k in range(n))
            val = permuted_value(v, p)
            old = table.get(t2)
            if old is not None and old != val:
                loc = tuple(module.basis[i] for i in t2)
                raise StructureError(
                    f"skew-symmetry violated at {loc}: {render(old)} vs {render(val)}"
                )
            table[t2] = val
    return PolyMap((module,) * n, target, table, skew=True)


def check_skew(P: PolyMap) -> Report:
    """Value(tau t) = -permute(tau, value(t)) for every adjacent transposition tau."""
    rep = Report("check-skew")
    if any(s != P.sources[0] for s in P.sources):
        rep.fail((), "sources differ; skew-symmetry undefined")
        return rep
    for t in P.tuples():
        for k in range(P.n - 1):
            perm = list(range(P.n))
            perm[k], perm[k + 1] = k + 1, k
            t2 = tuple(t[perm[i]] for i in range(P.n))
            if t2 < t:
                continue
            diff = P.value(t2) - permuted_value(P.value(t), perm)
            if diff:
                rep.fail(P.locator(t2), render(diff))
    return rep


# ---------------------------------------------------------------------------
# algebras, representations, maps


class LiePseudoalgebra:
    def __init__(self, module: FreeModule, bracket: PolyMap, name: str | None = None):
        if bracket.n != 2 or bracket.sources != (module, module) or bracket.target != module:
            raise StructureError("pseudobracket must be a map L (x) L -> H^2 (x)_H L")
        self.module = module
        self.bracket = bracket
        self.name = name or module.name

    @classmethod
    def abelian(cls, module: FreeModule) -> LiePseudoalgebra:
        return cls(module, PolyMap((module, module), module, {}, skew=True))

    @property
    def hopf(self) -> HopfAlgebra:
        return self.module.hopf

    @property
    def is_abelian(self) -> bool:
        return not self.bracket.table

    def adjoint(self) -> Representation:
        return Representation(self, self.module, self.bracket)

    def __repr__(self):
        return f"LiePseudoalgebra({self.name}, rank={self.module.rank})"


class Representation:
    def __init__(self, algebra: LiePseudoalgebra, module: FreeModule, action: PolyMap):
        if action.n != 2 or action.sources != (algebra.module, module) or action.target != module:
            raise StructureError("action must be a map L (x) M -> H^2 (x)_H M")
        self.algebra = algebra
        self.module = module
        self.action = action

    @classmethod
    def trivial(cls, algebra: LiePseudoalgebra, module: FreeModule) -> Representation:
        return cls(algebra, module, PolyMap((algebra.module, module), module, {}))

    def __repr__(self):
        return f"Representation({self.algebra.name} on {self.module.name})"


class ModuleMap:
    """H-linear map between free modules, given by images of basis vectors."""

    def __init__(self, source: FreeModule, target: FreeModule, images):
        images = list(images)
        if len(images) != source.rank:
            raise StructureError(f"need {source.rank} images, got {len(images)}")
        for im in images:
            if im.n != 1 or im.module != target:
                raise StructureError(f"images must be elements of {target.name}")
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def identity(cls, module: FreeModule) -> ModuleMap:
        return cls(module, module, [module.vector(i) for i in range(module.rank)])

    @classmethod
    def zero(cls, source: FreeModule, target: FreeModule) -> ModuleMap:
        return cls(source, target, [target.zero() for _ in range(source.rank)])

    @classmethod
    def from_matrix(cls, source: FreeModule, target: FreeModule, matrix) -> ModuleMap:
        """``matrix[i][j]`` is the coefficient (HopfElement or scalar) of e'_i in the image of e_j."""
        hopf = target.hopf
        images = []
        for j in range(source.rank):
            im = target.zero()
            for i in range(target.rank):
                h = matrix[i][j]
                if not isinstance(h, HopfElement):
                    h = hopf.scalar(h)
                im = im + target.vector(i, h)
            images.append(im)
        return cls(source, target, images)

    def __call__(self, T: TensorElement) -> TensorElement:
        """Apply to the module slot of any tensor (id (x)_H f)."""
        if T.module != self.source:
            raise TensorError(f"element of {T.module.name}, map defined on {self.source.name}")
        return apply_to_target(T, self.images, self.target)

    def compose(self, other: ModuleMap) -> ModuleMap:
        """``self o other``."""
        return ModuleMap(other.source, self.target, [self(im) for im in other.images])

    def __add__(self, other: ModuleMap) -> ModuleMap:
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.images, other.images)])

    def __neg__(self):
        return ModuleMap(self.source, self.target, [-a for a in self.images])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> ModuleMap:
        return ModuleMap(self.source, self.target, [a.scale(c) for a in self.images])

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self):
        return hash(tuple(self.images))

    def is_zero(self) -> bool:
        return not any(self.images)

    def matrix(self) -> list:
        hopf = self.target.hopf
        out = [[hopf.element() for _ in range(self.source.rank)] for _ in range(self.target.rank)]
        for j, im in enumerate(self.images):
            for ((h,), i), c in im.terms.items():
                out[i][j] = out[i][j] + hopf.element({h: c})
        return out

    def inverse(self) -> ModuleMap | None:
        """The inverse H-linear map, or None when not invertible."""
        if self.source.rank != self.target.rank:
            return None
        hopf = self.source.hopf
        if hopf.is_finite:
            return self._inverse_finite()
        return self._inverse_polynomial()

    def _inverse_finite(self):
        hopf = self.source.hopf
        field = hopf.field
        labels = hopf.basis()
        r = self.source.rank
        coords = {(g, i): n for n, (g, i) in enumerate(itertools.product(labels, range(r)))}
        size = len(coords)
        # column (g, j): g . f(e_j)
        mat = [[field.zero] * size for _ in range(size)]
        for (g, j), col in coords.items():
            for ((h,), i), c in self.images[j].terms.items():
                mat[coords[hopf.mul_label(g, h), i]][col] += c
        inv = matrix_inverse(mat, field)
        if inv is None:
            return None
        images = []
        for i in range(r):
            col = coords[hopf.one, i]
            terms = {}
            for (g, j), row in coords.items():
                if inv[row][col]:
                    terms[(g,), j] = inv[row][col]
            images.append(TensorElement(self.source, 1, terms))
        return ModuleMap(self.target, self.source, images)

    def _inverse_polynomial(self):
        hopf = self.source.hopf
        m = self.matrix()
        det = determinant(m, hopf)
        if not det.is_unit_scalar():
            return None
        dinv = hopf.field.one / det.terms[hopf.one]
        r = len(m)
        adj = [[hopf.element() for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for j in range(r):
                minor = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
                cof = determinant(minor, hopf) if minor else hopf.unit()
                adj[j][i] = cof * ((-1) ** (i + j)) * dinv
        return ModuleMap.from_matrix(self.target, self.source, adj)

    def render(self) -> str:
        return ", ".join(f"{b} -> {render(im)}" for b, im in zip(self.source.basis, self.images))

    def __repr__(self):
        return f"ModuleMap({self.render()})"


def determinant(m, hopf: HopfAlgebra) -> HopfElement:
    """Leibniz determinant over a commutative H."""
    r = len(m)
    total = hopf.element()
    for p in itertools.permutations(range(r)):
        term = hopf.scalar(permutation_sign(p))
        for i in range(r):
            term = term * m[i][p[i]]
            if not term:
                break
        total = total + term
    return total


def as_element(module: FreeModule, x) -> TensorElement:
    if isinstance(x, TensorElement):
        if x.module != module or x.n != 1:
            raise TensorError(f"expected an element of {module.name}")
        return x
    return module.vector(x)


# ---------------------------------------------------------------------------
# evaluation and checks


def eval_bracket(B: PolyMap, x, y) -> TensorElement:
    return B.on(as_element(B.sources[0], x), as_element(B.sources[1], y))


def compose_left(B_out: PolyMap, B_in: PolyMap, x, y, z) -> TensorElement:
    """[[x*y]*z] with the inner bracket spliced into the first slot."""
    X = Labeled((0,), as_element(B_in.sources[0], x))
    Y = Labeled((1,), as_element(B_in.sources[1], y))
    Z = Labeled((2,), as_element(B_out.sources[1], z))
    return B_out(B_in(X, Y), Z).tensor


def compose_right(B_out: PolyMap, B_in: PolyMap, x, y, z) -> TensorElement:
    """[x*[y*z]] with the inner bracket spliced into the second slot."""
    X = Labeled((0,), as_element(B_out.sources[0], x))
    Y = Labeled((1,), as_element(B_in.sources[0], y))
    Z = Labeled((2,), as_element(B_in.sources[1], z))
    return B_out(X, B_in(Y, Z)).tensor


def jacobi_defect(rho: PolyMap, i: int, j: int, k: int) -> TensorElement:
    """[[x*y]*z] - [x*[y*z]] + [y*[x*z]] on basis vectors, legs in (x, y, z) order."""
    L = rho.sources[0]
    x, y, z = variable(L, i, 0), variable(L, j, 1), variable(L, k, 2)
    lhs = rho(rho(x, y), z).tensor
    r1 = rho(x, rho(y, z)).tensor
    # labels put the legs of [y*[x*z]] back into (x, y, z) order: the flip of the first two legs
    r2 = rho(y, rho(x, z)).tensor
    return lhs - r1 + r2


def check_jacobi(A: LiePseudoalgebra | PolyMap) -> Report:
    rho = A.bracket if isinstance(A, LiePseudoalgebra) else A
    rep = Report("check-jacobi")
    L = rho.sources[0]
    for t in itertools.product(range(L.rank), repeat=3):
        d = jacobi_defect(rho, *t)
        if d:
            rep.fail(tuple(L.basis[i] for i in t), render(d))
    return rep


def check_algebra(A: LiePseudoalgebra) -> Report:
    rep = Report("check-algebra")
    rep.extend(check_skew(A.bracket), "skew")
    rep.extend(check_jacobi(A), "jacobi")
    return rep


def representation_defect(R: Representation, i: int, j: int, a: int) -> TensorElement:
    rho, psi = R.algebra.bracket, R.action
    L, M = R.algebra.module, R.module
    x, y, u = variable(L, i, 0), variable(L, j, 1), variable(M, a, 2)
    return psi(rho(x, y), u).tensor - psi(x, psi(y, u)).tensor + psi(y, psi(x, u)).tensor


def check_representation(R: Representation) -> Report:
    rep = Report("check-rep")
    L, M = R.algebra.module, R.module
    for i, j, a in itertools.product(range(L.rank), range(L.rank), range(M.rank)):
        d = representation_defect(R, i, j, a)
        if d:
            rep.fail((L.basis[i], L.basis[j], M.basis[a]), render(d))
    return rep


def check_homomorphism(theta: ModuleMap, A: LiePseudoalgebra, B: LiePseudoalgebra, require_iso: bool = False) -> Report:
    """[theta x * theta y]_B = (id (x)_H theta)[x*y]_A on basis pairs."""
    rep = Report("check-homomorphism")
    if theta.source != A.module or theta.target != B.module:
        rep.fail((), "shape mismatch")
        return rep
    L = A.module
    for i, j in itertools.product(range(L.rank), repeat=2):
        lhs = B.bracket.on(theta.images[i], theta.images[j])
        rhs = theta(A.bracket.value((i, j)))
        d = lhs - rhs
        if d:
            rep.fail((L.basis[i], L.basis[j]), render(d))
    if require_iso and theta.inverse() is None:
        rep.fail((), "map is not invertible", "iso")
    return rep


def is_automorphism(theta: ModuleMap, A: LiePseudoalgebra) -> bool:
    return check_homomorphism(theta, A, A).ok and theta.inverse() is not None


# ---------------------------------------------------------------------------
# builders


def bracket_from_constants(module: FreeModule, constants: dict) -> PolyMap:
    """Bracket (1 (x) 1) (x)_H [e_i, e_j] from classical structure constants.

    ``constants[(i, j)]`` maps k to the coefficient of e_k in [e_i, e_j]; the
    table is completed by antisymmetry.
    """
    hopf = module.hopf
    one2 = (hopf.one, hopf.one)
    entries = {}
    for (i, j), row in constants.items():
        terms = {(one2, k): hopf.field(c) for k, c in row.items()}
        entries[(i, j)] = TensorElement(module, 2, terms)
    return skew_complete(module, module, entries, 2)


def classical_jacobi_holds(rank: int, constants: dict, field) -> bool:
    def br(i, j):
        row = constants.get((i, j))
        if row is not None:
            return row
        row = constants.get((j, i), {})
        return {k: -field(c) for k, c in row.items()}

    for i, j, k in itertools.combinations(range(rank), 3):
        total: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, cm in br(a, b).items():
                for n, cn in br(m, c).items():
                    total[n] = total.get(n, field.zero) + field(cm) * field(cn)
        if any(total.values()):
            return False
    return True


def current_pseudoalgebra(basis, constants: dict, hopf: HopfAlgebra, name: str = "Cur") -> LiePseudoalgebra:
    """Cur g over H: the free module on g with [a*b] = (1 (x) 1) (x)_H [a, b]."""
    module = FreeModule(name, basis, hopf)
    idx = {}
    for (a, b), row in constants.items():
        i = module.index(a) if not isinstance(a, int) else a
        j = module.index(b) if not isinstance(b, int) else b
        idx[(i, j)] = {(module.index(k) if not isinstance(k, int) else k): c for k, c in row.items()}
    if not classical_jacobi_holds(module.rank, idx, hopf.field):
        raise StructureError("structure constants fail the Jacobi identity")
    return LiePseudoalgebra(module, bracket_from_constants(module, idx), name)


# ---------------------------------------------------------------------------
# lambda-bracket dictionary for H = k[d]


def _require_d1(hopf: HopfAlgebra):
    if not isinstance(hopf, PolynomialHopf) or len(hopf.generators) != 1:
        raise StructureError("the lambda dictionary needs H = k[d] with one generator")


def from_lambda_bracket(module: FreeModule, table: dict) -> PolyMap:
    """Pseudobracket from lambda-bracket data.

    ``table[(i, j)]`` maps ``(m, a, k)`` to the coefficient of lambda^m d^a e_k
    in [e_i lambda e_j].  lambda^m d^a e_k becomes (-1)^m (d^m (x) 1) Delta(d^a) (x)_H e_k.
    """
    hopf = module.hopf
    _require_d1(hopf)
    field = hopf.field
    out = {}
    for (i, j), poly in table.items():
        terms: dict = {}
        for (m, a, k), c in poly.items():
            c = field(c) * (1 if m % 2 == 0 else -1)
            for d, legs in hopf.expand(((m,), (0,)), (a,)):
                key = (legs, k)
                terms[key] = terms.get(key, field.zero) + c * d
        out[(i, j)] = TensorElement(module, 2, terms)
    return PolyMap((module, module), module, out, skew=True)


def to_lambda_bracket(B: PolyMap) -> dict:
    """Inverse of :func:`from_lambda_bracket`: (d^p (x) d^q) e  ->  (-lambda)^p (lambda + d)^q e."""
    hopf = B.hopf
    _require_d1(hopf)
    field = hopf.field
    out = {}
    for key, T in B.table.items():
        poly: dict = {}
        for (((p,), (q,)), k), c in T.terms.items():
            sign = 1 if p % 2 == 0 else -1
            for r in range(q + 1):
                mono = (p + r, q - r, k)
                poly[mono] = poly.get(mono, field.zero) + c * sign * comb(q, r)
        poly = {m: c for m, c in poly.items() if c}
        if poly:
            out[key] = poly
    return out


def lambda_jacobi_defects(table: dict, rank: int) -> list:
    """Check the lambda-bracket Jacobi identity symbolically with sympy.

    Returns the (i, j, k) triples where
    [a_lambda [b_mu c]] - [b_mu [a_lambda c]] - [[a_lambda b]_{lambda+mu} c] != 0.
    """
    import sympy

    lam, mu, d = sympy.symbols("lam mu d")

    def as_poly(i, j, var):
        # {k: polynomial in (var, d)}
        out: dict = {}
        for (m, a, k), c in table.get((i, j), {}).items():
            c = sympy.Rational(str(c))
            out[k] = out.get(k, 0) + c * var**m * d**a
        return out

    def bracket_on(i, elem, var):
        # [e_i var (sum_k q_k(d) e_k)] = sum_k q_k(var + d) [e_i var e_k]
        out: dict = {}
        for k, q in elem.items():
            shifted = q.subs(d, var + d)
            for k2, r in as_poly(i, k, var).items():
                out[k2] = out.get(k2, 0) + shifted * r
        return out

    bad = []
    for i, j, k in itertools.product(range(rank), repeat=3):
        left = bracket_on(i, as_poly(j, k, mu), lam)
        right = bracket_on(j, as_poly(i, k, lam), mu)
        nested: dict = {}
        for c2, p in as_poly(i, j, lam).items():
            # [(p(d) c2)_{nu} e_k] = p(-nu) [c2_nu e_k], nu = lam + mu
            nu = lam + mu
            factor = p.subs(d, -nu)
            for k2, r in as_poly(c2, k, nu).items():
                nested[k2] = nested.get(k2, 0) + factor * r
        for key in set(left) | set(right) | set(nested):
            diff = sympy.expand(left.get(key, 0) - right.get(key, 0) - nested.get(key, 0))
            if diff != 0:
                bad.append((i, j, k))
                break
    return bad
