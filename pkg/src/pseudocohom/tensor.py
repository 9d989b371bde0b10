"""Canonical elements of H^{(x)n} (x)_H M for free finite-rank H-modules M.

For free M the quotient H^{(x)n} (x)_H M is isomorphic to H^{(x)n} (x) k^r via
``F (x)_H h e_i  ->  F . Delta^(n-1)(h) (x) e_i``, so a tensor is stored as a
map ``(legs, basis index) -> coefficient``.

Iterated brackets are evaluated with *labeled* legs: every argument carries the
names of the variables its legs belong to, substitution concatenates them, and
the result is put back into increasing variable order.  This single rule
produces every leg permutation that shows up in nested bracket formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hopf import (
    HopfAlgebra,
    HopfElement,
    HopfTensor,
    ParseError,
    _ElementParser,
    _render_coeff_mono,
    tokenize,
)


class TensorError(ValueError):
    pass


class FreeModule:
    """Free H-module with a named basis."""

    def __init__(self, name: str, basis, hopf: HopfAlgebra):
        self.name = name
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise TensorError(f"module {name}: basis labels must be distinct")
        self.hopf = hopf
        self._index = {b: i for i, b in enumerate(self.basis)}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise TensorError(f"{label!r} is not a basis element of {self.name}") from None

    def has(self, label) -> bool:
        return label in self._index

    def vector(self, i, h: HopfElement | None = None) -> TensorElement:
        """The arity-1 element ``h e_i`` (``h`` defaults to 1)."""
        if not isinstance(i, int):
            i = self.index(i)
        hopf = self.hopf
        if h is None:
            return TensorElement(self, 1, {((hopf.one,), i): hopf.field.one})
        return TensorElement(self, 1, {((a,), i): c for a, c in h.terms.items()})

    def zero(self, n: int = 1) -> TensorElement:
        return TensorElement(self, n, {})

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FreeModule)
            and self.basis == other.basis
            and self.name == other.name
            and self.hopf == other.hopf
        )

    def __hash__(self):
        return hash((self.name, self.basis))

    def __repr__(self):
        return f"FreeModule({self.name!r}, {list(self.basis)})"


class TensorElement:
    """Element of H^{(x)n} (x)_H M in canonical form; zero terms never stored."""

    __slots__ = ("module", "n", "terms")

    def __init__(self, module: FreeModule, n: int, terms: dict):
        self.module = module
        self.n = n
        self.terms = {k: c for k, c in terms.items() if c}

    @property
    def hopf(self) -> HopfAlgebra:
        return self.module.hopf

    def _compatible(self, other: TensorElement):
        if other.n != self.n:
            raise TensorError(f"arity mismatch: {self.n} vs {other.n}")
        if other.module is not self.module and other.module != self.module:
            raise TensorError(f"target mismatch: {self.module.name} vs {other.module.name}")

    def __add__(self, other: TensorElement) -> TensorElement:
        self._compatible(other)
        out = dict(self.terms)
        zero = self.hopf.field.zero
        for k, c in other.terms.items():
            out[k] = out.get(k, zero) + c
        return TensorElement(self.module, self.n, out)

    def __neg__(self):
        return TensorElement(self.module, self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> TensorElement:
        c = self.hopf.field(c)
        return TensorElement(self.module, self.n, {k: c * v for k, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def decompose(self) -> list[tuple[HopfTensor, TensorElement]]:
        """Split into (leg tensor, basis vector) pairs; inverse of canonicalize."""
        h = self.hopf
        out = []
        for (legs, i), c in self.terms.items():
            out.append((HopfTensor(h, self.n, {legs: c}), self.module.vector(i)))
        return out

    def __repr__(self):
        return f"TensorElement({render(self)!r})"

    def __str__(self):
        return render(self)


def canonicalize(terms, module: FreeModule, n: int) -> TensorElement:
    """Rewrite a list of ``(F, m)`` with F in H^{(x)n} and m an arity-1 element."""
    hopf = module.hopf
    zero = hopf.field.zero
    out: dict = {}
    for F, m in terms:
        if F.n != n:
            raise TensorError(f"leg tensor has {F.n} legs, expected {n}")
        if m.n != 1 or (m.module is not module and m.module != module):
            raise TensorError("module element must be an arity-1 element of the target")
        for (hl, i), c in m.terms.items():
            for legs, f in F.terms.items():
                for d, exp in hopf.expand(legs, hl[0]):
                    key = (exp, i)
                    out[key] = out.get(key, zero) + f * c * d
    return TensorElement(module, n, out)


def act(F: HopfTensor, T: TensorElement) -> TensorElement:
    """Left multiplication of the legs by F."""
    if F.n != T.n:
        raise TensorError(f"arity mismatch: {F.n} vs {T.n}")
    mul = T.hopf.mul_label
    zero = T.hopf.field.zero
    out: dict = {}
    for fl, f in F.terms.items():
        for (legs, i), c in T.terms.items():
            key = (tuple(mul(a, b) for a, b in zip(fl, legs)), i)
            out[key] = out.get(key, zero) + f * c
    return TensorElement(T.module, T.n, out)


def permute_legs(perm, T: TensorElement) -> TensorElement:
    """Move leg k to position ``perm[k]``; the M-slot is untouched."""
    perm = tuple(perm)
    if sorted(perm) != list(range(T.n)):
        raise TensorError(f"{perm} is not a permutation of {T.n} legs")
    if perm == tuple(range(T.n)):
        return T
    inv = [0] * T.n
    for k, p in enumerate(perm):
        inv[p] = k
    out = {}
    for (legs, i), c in T.terms.items():
        out[(tuple(legs[inv[j]] for j in range(T.n)), i)] = c
    return TensorElement(T.module, T.n, out)


def splice(F: HopfTensor, T: TensorElement, position: int = 0) -> TensorElement:
    """Expand leg ``position`` of T by Delta^(m) and multiply it on the left by F.

    F has m+1 legs; the result has ``T.n + m`` legs with the new block in place
    of the old leg.
    """
    hopf = T.hopf
    zero = hopf.field.zero
    m1 = F.n
    out: dict = {}
    for (legs, i), c in T.terms.items():
        a = legs[position]
        head, tail = legs[:position], legs[position + 1 :]
        for fl, f in F.terms.items():
            for d, block in hopf.expand(fl, a):
                key = (head + block + tail, i)
                out[key] = out.get(key, zero) + c * f * d
    return TensorElement(T.module, T.n + m1 - 1, out)


def equal(T1: TensorElement, T2: TensorElement) -> bool:
    T1._compatible(T2)
    return T1.terms == T2.terms


def apply_to_target(T: TensorElement, images, target: FreeModule) -> TensorElement:
    """``(id (x)_H f) T`` for an H-linear map f given by images of basis vectors."""
    hopf = T.hopf
    zero = hopf.field.zero
    out: dict = {}
    for (legs, i), c in T.terms.items():
        img = images[i]
        for (hl, j), d in img.terms.items():
            for e, exp in hopf.expand(legs, hl[0]):
                key = (exp, j)
                out[key] = out.get(key, zero) + c * d * e
    return TensorElement(target, T.n, out)


def reindex(T: TensorElement, target: FreeModule, mapping) -> TensorElement:
    """Move basis index i to ``mapping[i]`` (None drops the term)."""
    zero = T.hopf.field.zero
    out: dict = {}
    for (legs, i), c in T.terms.items():
        j = mapping[i]
        if j is None:
            continue
        out[(legs, j)] = out.get((legs, j), zero) + c
    return TensorElement(target, T.n, out)


# ---------------------------------------------------------------------------
# labeled evaluation


@dataclass(frozen=True)
class Labeled:
    """A tensor whose legs are tagged with variable names (increasing order)."""

    labels: tuple
    tensor: TensorElement

    def __post_init__(self):
        if len(self.labels) != self.tensor.n:
            raise TensorError("one label per leg required")


def variable(module: FreeModule, i: int, label) -> Labeled:
    """The basis vector e_i standing for the variable ``label``."""
    return Labeled((label,), module.vector(i))


def substitute(lookup, args, target: FreeModule) -> Labeled:
    """Evaluate a polylinear map on labeled arguments.

    ``lookup(basis_tuple)`` returns the map's value on basis vectors (a tensor
    with one leg per argument, or None for zero).  Leg k of that value is
    expanded into the legs of argument k, and all legs are then sorted by label.
    """
    hopf = target.hopf
    zero = hopf.field.zero
    labels = tuple(l for a in args for l in a.labels)
    if len(set(labels)) != len(labels):
        raise TensorError(f"repeated variable labels {labels}")
    order = sorted(range(len(labels)), key=labels.__getitem__)
    identity = order == list(range(len(labels)))
    expand = hopf.expand
    out: dict = {}
    per_arg = [list(a.tensor.terms.items()) for a in args]
    for combo in itertools.product(*per_arg):
        idxs = tuple(key[1] for key, _ in combo)
        value = lookup(idxs)
        if not value:
            continue
        c0 = hopf.field.one
        for _, c in combo:
            c0 = c0 * c
        prefixes = [key[0] for key, _ in combo]
        for (hlegs, d), c in value.terms.items():
            pieces = [expand(p, h) for p, h in zip(prefixes, hlegs)]
            base = c0 * c
            for choice in itertools.product(*pieces):
                coeff = base
                legs: tuple = ()
                for e, block in choice:
                    coeff = coeff * e
                    legs += block
                if not identity:
                    legs = tuple(legs[k] for k in order)
                key = (legs, d)
                out[key] = out.get(key, zero) + coeff
    return Labeled(tuple(sorted(labels)), TensorElement(target, len(labels), out))


# ---------------------------------------------------------------------------
# rendering and parsing


def render_term_legs(hopf: HopfAlgebra, legs) -> str:
    return "(" + " | ".join(hopf.render_label(a) for a in legs) + ")"


def render(T: TensorElement) -> str:
    if not T.terms:
        return "0"
    hopf = T.hopf
    basis = T.module.basis
    keys = sorted(T.terms, key=lambda k: (tuple(hopf.sort_key(a) for a in k[0]), k[1]))
    parts = []
    for pos, key in enumerate(keys):
        legs, i = key
        mono = f"{render_term_legs(hopf, legs)} {basis[i]}"
        parts.append(_render_coeff_mono(T.terms[key], mono, pos == 0))
    return "".join(parts)


def parse_tensor(text: str, module: FreeModule, n: int) -> TensorElement:
    """Parse a sum of terms ``[c*](f | g | ...) e`` or bare ``e`` (all legs 1)."""
    hopf = module.hopf
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty tensor expression", 1, text)
    if len(tokens) == 1 and tokens[0][:2] == ("num", "0"):
        return module.zero(n)
    p = _ElementParser(hopf, tokens, text)
    total = module.zero(n)
    first = True
    while p.peek() is not None:
        sign = 1
        t = p.peek()
        if t[0] == "op" and t[1] in "+-":
            p.take()
            sign = -1 if t[1] == "-" else 1
        elif not first:
            raise ParseError(f"expected '+' or '-', found {t[1]!r}", t[2], text)
        first = False
        coeff = hopf.field(sign)
        t = p.peek()
        if t is not None and t[0] == "num":
            p.take()
            try:
                coeff = coeff * hopf.field(t[1])
            except ValueError as exc:
                raise ParseError(str(exc), t[2], text) from None
            p.expect("*")
        t = p.take()
        if t[0] == "op" and t[1] == "(":
            factors = [p.element()]
            while True:
                s = p.take()
                if s[0] == "op" and s[1] == "|":
                    factors.append(p.element())
                elif s[0] == "op" and s[1] == ")":
                    break
                else:
                    raise ParseError(f"expected '|' or ')', found {s[1]!r}", s[2], text)
            if len(factors) != n:
                raise ParseError(f"term has {len(factors)} legs, expected {n}", t[2], text)
            b = p.take()
        else:
            factors = [hopf.unit()] * n
            b = t
        if b[0] != "ident" or not module.has(b[1]):
            raise ParseError(f"{b[1]!r} is not a basis element of {module.name}", b[2], text)
        F = HopfTensor.pure(*factors)
        total = total + canonicalize([(F, module.vector(b[1]))], module, n).scale(coeff)
    return total
