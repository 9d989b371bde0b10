"""Cocommutative Hopf algebras with a multiplicative monomial basis.

Three kernels are provided: the ground field itself, group algebras of finite
groups given by a multiplication table, and polynomial algebras k[d_1..d_n]
with primitive generators.  In all three the product of two basis elements is
again a basis element, so an element is a finite map ``label -> coefficient``.
"""

from __future__ import annotations

import itertools
import re
from math import comb, factorial

from .scalars import QQ, ScalarField


class HopfError(ValueError):
    pass


class HopfAlgebra:
    """Base descriptor. Subclasses define the structure maps on basis labels."""

    kind = "abstract"

    def __init__(self, field: ScalarField):
        self.field = field
        self._coproduct_cache: dict = {}
        self._expand_cache: dict = {}

    # -- structure on basis labels -------------------------------------
    one: object

    def mul_label(self, a, b):
        raise NotImplementedError

    def _coproduct(self, a, n: int):
        raise NotImplementedError

    def counit_label(self, a):
        raise NotImplementedError

    def antipode_label(self, a):
        raise NotImplementedError

    def basis(self) -> list | None:
        """All basis labels when H is finite dimensional, else None."""
        return None

    def sort_key(self, a):
        return a

    def render_label(self, a) -> str:
        raise NotImplementedError

    def ident(self, name: str):
        """Basis label named by an identifier in element expressions."""
        raise HopfError(f"unknown identifier {name!r} for {self.kind} Hopf algebra")

    @property
    def is_finite(self) -> bool:
        return self.basis() is not None

    @property
    def dimension(self) -> int | None:
        b = self.basis()
        return None if b is None else len(b)

    # -- cached helpers --------------------------------------------------
    def coproduct(self, a, n: int) -> tuple:
        """Iterated coproduct Delta^(n-1) of a basis label, as ((coeff, legs), ...)."""
        key = (a, n)
        hit = self._coproduct_cache.get(key)
        if hit is None:
            if n == 1:
                hit = ((self.field.one, (a,)),)
            else:
                hit = tuple(self._coproduct(a, n))
            self._coproduct_cache[key] = hit
        return hit

    def expand(self, prefix: tuple, a) -> tuple:
        """``prefix . Delta^(m-1)(a)`` with m = len(prefix), legwise product."""
        key = (prefix, a)
        hit = self._expand_cache.get(key)
        if hit is None:
            mul = self.mul_label
            hit = tuple(
                (c, tuple(mul(f, g) for f, g in zip(prefix, legs)))
                for c, legs in self.coproduct(a, len(prefix))
            )
            self._expand_cache[key] = hit
        return hit

    def element(self, terms=None) -> HopfElement:
        return HopfElement(self, terms or {})

    def unit(self) -> HopfElement:
        return HopfElement(self, {self.one: self.field.one})

    def scalar(self, c) -> HopfElement:
        return HopfElement(self, {self.one: self.field(c)})

    def basis_element(self, a) -> HopfElement:
        return HopfElement(self, {a: self.field.one})

    def parse(self, text: str) -> HopfElement:
        return parse_element(self, text)

    def describe(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and self.describe() == other.describe() and self.field == other.field

    def __hash__(self):
        return hash((self.kind, self.field))


class TrivialHopf(HopfAlgebra):
    """H = k."""

    kind = "trivial"
    one = ()

    def mul_label(self, a, b):
        return ()

    def _coproduct(self, a, n):
        return [(self.field.one, ((),) * n)]

    def counit_label(self, a):
        return self.field.one

    def antipode_label(self, a):
        return self.field.one, ()

    def basis(self):
        return [()]

    def render_label(self, a):
        return "1"

    def describe(self):
        return {"kind": "trivial"}

    def __repr__(self):
        return f"TrivialHopf({self.field.name()})"


class GroupHopf(HopfAlgebra):
    """Group algebra k[G] of a finite group given by its multiplication table."""

    kind = "group"

    def __init__(self, field: ScalarField, elements, table):
        super().__init__(field)
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise HopfError("group element names must be distinct")
        for name in self.elements:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                raise HopfError(f"bad group element name {name!r}")
        self.table = {}
        for a, row in zip(self.elements, table):
            if len(row) != len(self.elements):
                raise HopfError("multiplication table must be square")
            for b, c in zip(self.elements, row):
                if c not in self.elements:
                    raise HopfError(f"{a}*{b} = {c!r} is not a group element")
                self.table[a, b] = c
        if len(table) != len(self.elements):
            raise HopfError("multiplication table must be square")
        self._validate()
        self._index = {g: i for i, g in enumerate(self.elements)}

    def _validate(self):
        els, t = self.elements, self.table
        ids = [e for e in els if all(t[e, g] == g and t[g, e] == g for g in els)]
        if not ids:
            raise HopfError("multiplication table has no identity")
        self.one = ids[0]
        for a, b, c in itertools.product(els, repeat=3):
            if t[t[a, b], c] != t[a, t[b, c]]:
                raise HopfError(f"multiplication table is not associative at ({a},{b},{c})")
        self.inverses = {}
        for a in els:
            inv = [b for b in els if t[a, b] == self.one]
            if not inv:
                raise HopfError(f"{a} has no inverse")
            self.inverses[a] = inv[0]

    def mul_label(self, a, b):
        return self.table[a, b]

    def _coproduct(self, a, n):
        return [(self.field.one, (a,) * n)]

    def counit_label(self, a):
        return self.field.one

    def antipode_label(self, a):
        return self.field.one, self.inverses[a]

    def basis(self):
        return list(self.elements)

    def sort_key(self, a):
        return self._index[a]

    def render_label(self, a):
        return a

    def ident(self, name):
        if name in self._index:
            return name
        return super().ident(name)

    def describe(self):
        return {
            "kind": "group",
            "elements": list(self.elements),
            "table": [[self.table[a, b] for b in self.elements] for a in self.elements],
        }

    def __repr__(self):
        return f"GroupHopf({self.field.name()}, |G|={len(self.elements)})"


class PolynomialHopf(HopfAlgebra):
    """k[d_1, ..., d_n] with every generator primitive."""

    kind = "polynomial"

    def __init__(self, field: ScalarField, generators):
        super().__init__(field)
        self.generators = tuple(generators)
        if not self.generators:
            raise HopfError("polynomial Hopf algebra needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise HopfError("generator names must be distinct")
        self.one = (0,) * len(self.generators)
        self._gen_index = {g: i for i, g in enumerate(self.generators)}

    def mul_label(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _coproduct(self, a, n):
        # split every exponent independently into n ordered parts
        per_gen = []
        for e in a:
            parts = []
            for comp in _compositions(e, n):
                coeff = factorial(e)
                for k in comp:
                    coeff //= factorial(k)
                parts.append((coeff, comp))
            per_gen.append(parts)
        out = []
        for choice in itertools.product(*per_gen):
            coeff = 1
            for c, _ in choice:
                coeff *= c
            legs = tuple(tuple(comp[j] for _, comp in choice) for j in range(n))
            out.append((self.field(coeff), legs))
        return out

    def counit_label(self, a):
        return self.field.one if not any(a) else self.field.zero

    def antipode_label(self, a):
        return (self.field.one if sum(a) % 2 == 0 else -self.field.one), a

    def sort_key(self, a):
        # graded lexicographic
        return (sum(a), a)

    def render_label(self, a):
        if not any(a):
            return "1"
        parts = []
        for g, e in zip(self.generators, a):
            if e == 1:
                parts.append(g)
            elif e > 1:
                parts.append(f"{g}^{e}")
        return "*".join(parts)

    def ident(self, name):
        i = self._gen_index.get(name)
        if i is None:
            return super().ident(name)
        return tuple(1 if j == i else 0 for j in range(len(self.generators)))

    def monomials(self, max_degree: int) -> list:
        """All exponent vectors of total degree <= max_degree, graded-lex order."""
        d = len(self.generators)
        out = [e for e in itertools.product(range(max_degree + 1), repeat=d) if sum(e) <= max_degree]
        return sorted(out, key=self.sort_key)

    def describe(self):
        return {"kind": "polynomial", "generators": list(self.generators)}

    def __repr__(self):
        return f"PolynomialHopf({self.field.name()}, {list(self.generators)})"


def _compositions(e: int, n: int):
    if n == 1:
        yield (e,)
        return
    for k in range(e + 1):
        for rest in _compositions(e - k, n - 1):
            yield (k,) + rest


# ---------------------------------------------------------------------------
# constructors


def trivial(field: ScalarField = QQ) -> TrivialHopf:
    return TrivialHopf(field)


def group(field: ScalarField, elements, table) -> GroupHopf:
    return GroupHopf(field, elements, table)


def cyclic_group(field: ScalarField, n: int, names=None) -> GroupHopf:
    names = list(names) if names else [f"g{i}" for i in range(n)]
    table = [[names[(i + j) % n] for j in range(n)] for i in range(n)]
    return GroupHopf(field, names, table)


def symmetric_group_s3(field: ScalarField) -> GroupHopf:
    perms = list(itertools.permutations(range(3)))
    names = ["e", "a", "b", "c", "r", "s"]
    # order the permutations: identity, three transpositions, two 3-cycles
    ordered = [
        (0, 1, 2),
        (1, 0, 2),
        (0, 2, 1),
        (2, 1, 0),
        (1, 2, 0),
        (2, 0, 1),
    ]
    assert sorted(ordered) == sorted(perms)
    label = dict(zip(ordered, names))
    table = []
    for p in ordered:
        row = []
        for q in ordered:
            row.append(label[tuple(p[q[i]] for i in range(3))])
        table.append(row)
    return GroupHopf(field, names, table)


def polynomial(field: ScalarField, generators=("d",)) -> PolynomialHopf:
    return PolynomialHopf(field, generators)


def from_description(field: ScalarField, desc: dict) -> HopfAlgebra:
    kind = desc.get("kind")
    if kind == "trivial":
        return TrivialHopf(field)
    if kind == "group":
        return GroupHopf(field, desc["elements"], desc["table"])
    if kind == "polynomial":
        return PolynomialHopf(field, desc["generators"])
    raise HopfError(f"unknown Hopf algebra kind {kind!r}")


# ---------------------------------------------------------------------------
# elements


class HopfElement:
    """Finite linear combination of basis labels, zeros never stored."""

    __slots__ = ("hopf", "terms")

    def __init__(self, hopf: HopfAlgebra, terms: dict):
        self.hopf = hopf
        self.terms = {a: c for a, c in terms.items() if c}

    def _check(self, other: HopfElement):
        if other.hopf is not self.hopf and other.hopf != self.hopf:
            raise HopfError("Hopf algebra mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, self.hopf.field.zero) + c
        return HopfElement(self.hopf, out)

    def __neg__(self):
        return HopfElement(self.hopf, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HopfElement):
            return mul(self, other)
        c = self.hopf.field(other)
        return HopfElement(self.hopf, {a: x * c for a, x in self.terms.items()})

    def __rmul__(self, other):
        c = self.hopf.field(other)
        return HopfElement(self.hopf, {a: c * x for a, x in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, HopfElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_unit_scalar(self) -> bool:
        """True when the element is a nonzero multiple of 1."""
        return len(self.terms) == 1 and self.hopf.one in self.terms

    def __repr__(self):
        return f"HopfElement({render_element(self)!r})"

    def __str__(self):
        return render_element(self)


class HopfTensor:
    """Element of H^{(x)n}: finite map from n-tuples of labels to coefficients."""

    __slots__ = ("hopf", "n", "terms")

    def __init__(self, hopf: HopfAlgebra, n: int, terms: dict):
        self.hopf = hopf
        self.n = n
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def pure(cls, *factors: HopfElement) -> HopfTensor:
        hopf = factors[0].hopf
        out: dict = {}
        zero = hopf.field.zero
        for combo in itertools.product(*(f.terms.items() for f in factors)):
            legs = tuple(a for a, _ in combo)
            c = hopf.field.one
            for _, x in combo:
                c = c * x
            out[legs] = out.get(legs, zero) + c
        return cls(hopf, len(factors), out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, self.hopf.field.zero) + c
        return HopfTensor(self.hopf, self.n, out)

    def __neg__(self):
        return HopfTensor(self.hopf, self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: HopfTensor) -> HopfTensor:
        """Legwise product in the algebra H^{(x)n}."""
        if other.n != self.n:
            raise HopfError("tensor arity mismatch")
        out: dict = {}
        zero = self.hopf.field.zero
        mul_label = self.hopf.mul_label
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(mul_label(a, b) for a, b in zip(k1, k2))
                out[k] = out.get(k, zero) + c1 * c2
        return HopfTensor(self.hopf, self.n, out)

    def flip(self, perm) -> HopfTensor:
        """Move leg i to position perm[i]."""
        out = {}
        for legs, c in self.terms.items():
            new = [None] * self.n
            for i, a in enumerate(legs):
                new[perm[i]] = a
            out[tuple(new)] = c
        return HopfTensor(self.hopf, self.n, out)

    def __eq__(self, other):
        if not isinstance(other, HopfTensor):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"HopfTensor({render_tensor(self)!r})"

    __str__ = lambda self: render_tensor(self)  # noqa: E731


# ---------------------------------------------------------------------------
# structure maps on elements


def _same(a: HopfElement, b: HopfElement):
    if a.hopf is not b.hopf and a.hopf != b.hopf:
        raise HopfError("elements live in different Hopf algebras")


def mul(a: HopfElement, b: HopfElement) -> HopfElement:
    _same(a, b)
    h = a.hopf
    out: dict = {}
    zero = h.field.zero
    for x, c in a.terms.items():
        for y, d in b.terms.items():
            z = h.mul_label(x, y)
            out[z] = out.get(z, zero) + c * d
    return HopfElement(h, out)


def iterated_comul(a: HopfElement, n: int) -> HopfTensor:
    if n < 1:
        raise HopfError("n must be positive")
    h = a.hopf
    out: dict = {}
    zero = h.field.zero
    for x, c in a.terms.items():
        for d, legs in h.coproduct(x, n):
            out[legs] = out.get(legs, zero) + c * d
    return HopfTensor(h, n, out)


def comul(a: HopfElement) -> HopfTensor:
    return iterated_comul(a, 2)


def counit(a: HopfElement):
    h = a.hopf
    total = h.field.zero
    for x, c in a.terms.items():
        total = total + c * h.counit_label(x)
    return total


def antipode(a: HopfElement) -> HopfElement:
    h = a.hopf
    out: dict = {}
    zero = h.field.zero
    for x, c in a.terms.items():
        s, y = h.antipode_label(x)
        out[y] = out.get(y, zero) + c * s
    return HopfElement(h, out)


def counit_tensor(t: HopfTensor, leg: int) -> HopfElement:
    """Apply epsilon to one leg of a 2-tensor, returning the other leg."""
    h = t.hopf
    out: dict = {}
    zero = h.field.zero
    for legs, c in t.terms.items():
        keep = legs[1 - leg]
        out[keep] = out.get(keep, zero) + c * h.counit_label(legs[leg])
    return HopfElement(h, out)


def check_axioms(h: HopfAlgebra, labels=None) -> list[str]:
    """Verify the Hopf and cocommutativity axioms on basis labels.

    Returns a list of human-readable failures (empty when all hold).
    """
    if labels is None:
        labels = h.basis()
        if labels is None:
            labels = h.monomials(3)
    failures = []
    one = h.unit()
    for a in labels:
        x = h.basis_element(a)
        d2 = comul(x)
        # coassociativity
        left = HopfTensor(h, 3, {})
        right = HopfTensor(h, 3, {})
        for (p, q), c in d2.terms.items():
            for cc, legs in h.coproduct(p, 2):
                left = left + HopfTensor(h, 3, {legs + (q,): c * cc})
            for cc, legs in h.coproduct(q, 2):
                right = right + HopfTensor(h, 3, {(p,) + legs: c * cc})
        if left != right:
            failures.append(f"coassociativity fails at {h.render_label(a)}")
        if left != iterated_comul(x, 3):
            failures.append(f"iterated coproduct disagrees at {h.render_label(a)}")
        # counit
        if counit_tensor(d2, 0) != x or counit_tensor(d2, 1) != x:
            failures.append(f"counit axiom fails at {h.render_label(a)}")
        # antipode
        s_left = h.element()
        s_right = h.element()
        for (p, q), c in d2.terms.items():
            s_left = s_left + c * mul(antipode(h.basis_element(p)), h.basis_element(q))
            s_right = s_right + c * mul(h.basis_element(p), antipode(h.basis_element(q)))
        expected = counit(x) * one
        if s_left != expected or s_right != expected:
            failures.append(f"antipode axiom fails at {h.render_label(a)}")
        # cocommutativity
        if d2.flip((1, 0)) != d2:
            failures.append(f"cocommutativity fails at {h.render_label(a)}")
    # associativity and unit of the product
    for a, b in itertools.product(labels, repeat=2):
        if h.mul_label(a, h.one) != a or h.mul_label(h.one, a) != a:
            failures.append(f"unit fails at {h.render_label(a)}")
            break
    for a, b, c in itertools.product(labels, repeat=3):
        if h.mul_label(h.mul_label(a, b), c) != h.mul_label(a, h.mul_label(b, c)):
            failures.append(f"associativity fails at ({a}, {b}, {c})")
    return failures


# ---------------------------------------------------------------------------
# printing and parsing


def _render_coeff_mono(c, mono: str, first: bool) -> str:
    s = str(c)
    neg = s.startswith("-")
    mag = s[1:] if neg else s
    if mono == "1":
        body = mag
    elif mag == "1":
        body = mono
    else:
        body = f"{mag}*{mono}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def render_element(a: HopfElement) -> str:
    if not a.terms:
        return "0"
    h = a.hopf
    keys = sorted(a.terms, key=h.sort_key, reverse=h.kind == "polynomial")
    return "".join(
        _render_coeff_mono(a.terms[k], h.render_label(k), i == 0) for i, k in enumerate(keys)
    )


def render_tensor(t: HopfTensor) -> str:
    if not t.terms:
        return "0"
    h = t.hopf
    keys = sorted(t.terms, key=lambda legs: tuple(h.sort_key(x) for x in legs))
    parts = []
    for i, legs in enumerate(keys):
        mono = "(" + " | ".join(h.render_label(x) for x in legs) + ")"
        parts.append(_render_coeff_mono(t.terms[legs], mono, i == 0))
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split an expression into (kind, text, column) tokens."""
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            out.append(("num", m.group(1), col))
        elif m.group(2):
            out.append(("ident", m.group(2), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    return out


class ParseError(ValueError):
    def __init__(self, message: str, column: int | None = None, text: str | None = None):
        self.column = column
        self.text = text
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}" + (f" in {text!r}" if text else ""))


class _ElementParser:
    def __init__(self, hopf: HopfAlgebra, tokens, text: str):
        self.h = hopf
        self.toks = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression", len(self.text) + 1, self.text)
        self.i += 1
        return t

    def expect(self, op: str):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}, found {t[1]!r}", t[2], self.text)

    def element(self) -> HopfElement:
        h = self.h
        total = h.element()
        sign = 1
        t = self.peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        total = total + self.term() * sign
        while True:
            t = self.peek()
            if t is None or t[0] != "op" or t[1] not in "+-":
                return total
            self.take()
            s = -1 if t[1] == "-" else 1
            total = total + self.term() * s

    def term(self) -> HopfElement:
        h = self.h
        value = h.unit()
        t = self.peek()
        if t is None:
            raise ParseError("expected a term", len(self.text) + 1, self.text)
        value = value * self.factor()
        while True:
            t = self.peek()
            if t is None or t != ("op", "*", t[2]):
                return value
            self.take()
            value = value * self.factor()

    def factor(self) -> HopfElement:
        h = self.h
        t = self.take()
        if t[0] == "num":
            if self.peek() is not None and self.peek()[0] == "op" and self.peek()[1] == "^":
                raise ParseError("exponent on a number", self.peek()[2], self.text)
            try:
                return h.scalar(h.field(t[1]))
            except ValueError as exc:
                raise ParseError(str(exc), t[2], self.text) from None
        if t[0] == "op" and t[1] == "(":
            inner = self.element()
            self.expect(")")
            base = inner
        elif t[0] == "ident":
            try:
                base = h.basis_element(h.ident(t[1]))
            except HopfError as exc:
                raise ParseError(str(exc), t[2], self.text) from None
        else:
            raise ParseError(f"unexpected {t[1]!r}", t[2], self.text)
        nt = self.peek()
        if nt is not None and nt[0] == "op" and nt[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num" or "/" in e[1]:
                raise ParseError("exponent must be a natural number", e[2], self.text)
            out = h.unit()
            for _ in range(int(e[1])):
                out = out * base
            return out
        return base


def parse_element(hopf: HopfAlgebra, text: str) -> HopfElement:
    """Parse ``elem := term (('+'|'-') term)*`` with ``term := factor ('*' factor)*``."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 1, text)
    p = _ElementParser(hopf, tokens, text)
    value = p.element()
    if p.peek() is not None:
        t = p.peek()
        raise ParseError(f"unexpected {t[1]!r}", t[2], text)
    return value


def binomial(n: int, k: int) -> int:
    return comb(n, k)
