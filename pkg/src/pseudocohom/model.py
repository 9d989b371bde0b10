"""JSON model files: named modules, brackets, actions, cochains, maps, cocycles and pairs.

Layout::

    {
      "scalars": "Q" | "F5" | ...,
      "hopf": {"kind": "trivial"} | {"kind": "group", "elements": [...], "table": [[...]]}
              | {"kind": "polynomial", "generators": ["d"]},
      "modules": {"L": ["x1", "x2"], ...},
      "brackets": {"L": {"module": "L", "skew_complete": true, "entries": {"x1 x2": "(1 | 1) z"}}},
      "actions": {"ad": {"algebra": "L", "module": "V", "entries": {"x1 v": "..."}}},
      "cochains": {"chi": {"sources": ["L", "L"], "target": "M", "skew_complete": true, "entries": {...}}},
      "maps": {"phi": {"source": "L", "target": "M", "images": {"x1": "z"}}},
      "cocycles": {"c": {"L": "L", "M": "M", "chi": "chi", "psi": "psi"}},
      "pairs": {"P1": {"beta": "b", "alpha": "a", "L": "L", "M": "M"}}
    }

Entry keys are basis labels separated by spaces; values use the tensor grammar
``[c*](f | g) e + ...``.  With ``skew_complete`` the remaining entries are
filled in by skew-symmetry and conflicting entries are rejected; without it the
table is taken as given and checked for skew-symmetry when the map is skew.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import hopf as hopf_mod
from .hopf import HopfError, ParseError
from .nonabelian import NonAbelianCocycle
from .pseudoalg import (
    LiePseudoalgebra,
    ModuleMap,
    PolyMap,
    Representation,
    StructureError,
    check_skew,
    is_automorphism,
    skew_complete,
)
from .scalars import FieldError, ScalarField
from .tensor import FreeModule, TensorError, parse_tensor, render
from .wells import AutPair

TOP_LEVEL = ("scalars", "hopf", "modules", "brackets", "actions", "cochains", "maps", "cocycles", "pairs")


class ModelError(ValueError):
    """Any problem with a model file; the message names the offending entry."""


@dataclass
class CocycleSpec:
    L: str
    M: str
    chi: str
    psi: str
    cocycle: NonAbelianCocycle


@dataclass
class PairSpec:
    beta: str
    alpha: str
    L: str
    M: str
    pair: AutPair


@dataclass
class Model:
    field: ScalarField
    hopf: hopf_mod.HopfAlgebra
    modules: dict = field(default_factory=dict)
    brackets: dict = field(default_factory=dict)  # name -> LiePseudoalgebra
    actions: dict = field(default_factory=dict)  # name -> (algebra name, Representation)
    cochains: dict = field(default_factory=dict)  # name -> PolyMap
    maps: dict = field(default_factory=dict)  # name -> ModuleMap
    cocycles: dict = field(default_factory=dict)  # name -> CocycleSpec
    pairs: dict = field(default_factory=dict)  # name -> PairSpec
    source: str = ""

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (
            self.field == other.field
            and self.hopf == other.hopf
            and self.modules == other.modules
            and {k: (a.module, a.bracket) for k, a in self.brackets.items()}
            == {k: (a.module, a.bracket) for k, a in other.brackets.items()}
            and {k: (n, r.module, r.action) for k, (n, r) in self.actions.items()}
            == {k: (n, r.module, r.action) for k, (n, r) in other.actions.items()}
            and self.cochains == other.cochains
            and self.maps == other.maps
            and {k: (s.L, s.M, s.chi, s.psi, s.cocycle) for k, s in self.cocycles.items()}
            == {k: (s.L, s.M, s.chi, s.psi, s.cocycle) for k, s in other.cocycles.items()}
            and {k: (s.beta, s.alpha, s.L, s.M, s.pair) for k, s in self.pairs.items()}
            == {k: (s.beta, s.alpha, s.L, s.M, s.pair) for k, s in other.pairs.items()}
        )

    # lookups ---------------------------------------------------------------
    def _get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            known = ", ".join(table) or "none"
            raise ModelError(f"unknown {kind[:-1]} {name!r} (known: {known})")
        return table[name]

    def algebra(self, name: str) -> LiePseudoalgebra:
        return self._get("brackets", name)

    def representation(self, name: str) -> Representation:
        return self._get("actions", name)[1]

    def cochain(self, name: str) -> PolyMap:
        return self._get("cochains", name)

    def map(self, name: str) -> ModuleMap:
        return self._get("maps", name)

    def cocycle(self, name: str) -> CocycleSpec:
        return self._get("cocycles", name)

    def pair(self, name: str) -> PairSpec:
        return self._get("pairs", name)


# ---------------------------------------------------------------------------
# parsing


def _tensor(text, module: FreeModule, n: int, where: str):
    if not isinstance(text, str):
        raise ModelError(f"{where}: expected an expression string")
    try:
        return parse_tensor(text, module, n)
    except ParseError as exc:
        raise ModelError(f"{where}: column {exc.column}: {exc}") from None
    except (TensorError, HopfError, FieldError) as exc:
        raise ModelError(f"{where}: {exc}") from None


def _key(key: str, sources, where: str) -> tuple:
    labels = key.split()
    if len(labels) != len(sources):
        raise ModelError(f"{where}: key {key!r} needs {len(sources)} basis labels")
    out = []
    for lab, m in zip(labels, sources):
        if not m.has(lab):
            raise ModelError(f"{where}: {lab!r} is not a basis element of {m.name}")
        out.append(m.index(lab))
    return tuple(out)


def _table(spec: dict, sources, target: FreeModule, where: str, skew: bool) -> PolyMap:
    entries = spec.get("entries", {})
    if not isinstance(entries, dict):
        raise ModelError(f"{where}: 'entries' must be an object")
    n = len(sources)
    parsed = {}
    for key, text in entries.items():
        t = _key(key, sources, where)
        if t in parsed:
            raise ModelError(f"{where}: duplicate entry {key!r}")
        parsed[t] = _tensor(text, target, n, f"{where}[{key!r}]")
    complete = spec.get("skew_complete", skew)
    if complete and not skew:
        raise ModelError(f"{where}: skew completion needs equal sources")
    try:
        if complete:
            return skew_complete(sources[0], target, parsed, n)
        P = PolyMap(sources, target, parsed, skew=skew)
    except StructureError as exc:
        raise ModelError(f"{where}: {exc}") from None
    if skew:
        rep = check_skew(P)
        if not rep.ok:
            f = rep.sorted_findings()[0]
            raise ModelError(f"{where}: skew-symmetry violated at {tuple(f.locator)}: {f.difference}")
    return P


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ModelError(f"{where}: missing key {key!r}")
    return d[key]


def _lookup(table: dict, name, kind: str, where: str):
    if name not in table:
        raise ModelError(f"{where}: unknown {kind} {name!r}")
    return table[name]


def model_from_dict(data: dict, source: str = "") -> Model:
    if not isinstance(data, dict):
        raise ModelError("model must be a JSON object")
    unknown = set(data) - set(TOP_LEVEL)
    if unknown:
        raise ModelError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    try:
        fld = ScalarField.parse(str(data.get("scalars", "Q")))
    except FieldError as exc:
        raise ModelError(f"scalars: {exc}") from None
    try:
        hopf = hopf_mod.from_description(fld, data.get("hopf", {"kind": "trivial"}))
    except (HopfError, KeyError, TypeError) as exc:
        raise ModelError(f"hopf: {exc}") from None
    failures = hopf_mod.check_axioms(hopf)
    if failures:
        raise ModelError(f"hopf: axioms fail: {failures[0]}")
    model = Model(fld, hopf, source=source)

    for name, basis in data.get("modules", {}).items():
        if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
            raise ModelError(f"modules.{name}: expected a list of basis labels")
        try:
            model.modules[name] = FreeModule(name, basis, hopf)
        except TensorError as exc:
            raise ModelError(f"modules.{name}: {exc}") from None

    for name, spec in data.get("brackets", {}).items():
        where = f"brackets.{name}"
        m = _lookup(model.modules, _need(spec, "module", where), "module", where)
        model.brackets[name] = LiePseudoalgebra(m, _table(spec, (m, m), m, where, skew=True), name)

    for name, spec in data.get("actions", {}).items():
        where = f"actions.{name}"
        alg_name = _need(spec, "algebra", where)
        A = _lookup(model.brackets, alg_name, "bracket", where)
        m = _lookup(model.modules, _need(spec, "module", where), "module", where)
        model.actions[name] = (alg_name, Representation(A, m, _table(spec, (A.module, m), m, where, skew=False)))

    for name, spec in data.get("cochains", {}).items():
        where = f"cochains.{name}"
        srcs = tuple(_lookup(model.modules, s, "module", where) for s in _need(spec, "sources", where))
        target = _lookup(model.modules, _need(spec, "target", where), "module", where)
        if not srcs:
            raise ModelError(f"{where}: a cochain needs at least one source")
        skew = bool(spec.get("skew", spec.get("skew_complete", False))) and all(s == srcs[0] for s in srcs)
        model.cochains[name] = _table(spec, srcs, target, where, skew=skew)

    for name, spec in data.get("maps", {}).items():
        where = f"maps.{name}"
        src = _lookup(model.modules, _need(spec, "source", where), "module", where)
        target = _lookup(model.modules, _need(spec, "target", where), "module", where)
        images = [target.zero(1) for _ in range(src.rank)]
        for lab, text in spec.get("images", {}).items():
            if not src.has(lab):
                raise ModelError(f"{where}: {lab!r} is not a basis element of {src.name}")
            images[src.index(lab)] = _tensor(text, target, 1, f"{where}[{lab!r}]")
        model.maps[name] = ModuleMap(src, target, images)

    for name, spec in data.get("cocycles", {}).items():
        where = f"cocycles.{name}"
        names = {k: _need(spec, k, where) for k in ("L", "M", "chi", "psi")}
        L = _lookup(model.brackets, names["L"], "bracket", where)
        M = _lookup(model.brackets, names["M"], "bracket", where)
        chi = _lookup(model.cochains, names["chi"], "cochain", where)
        psi = _lookup(model.cochains, names["psi"], "cochain", where)
        if chi.sources != (L.module, L.module) or chi.target != M.module:
            raise ModelError(f"{where}: chi must map {L.module.name} x {L.module.name} to {M.module.name}")
        if psi.sources != (L.module, M.module) or psi.target != M.module:
            raise ModelError(f"{where}: psi must map {L.module.name} x {M.module.name} to {M.module.name}")
        if L.module == M.module:
            raise ModelError(f"{where}: L and M need distinct modules")
        chi = PolyMap(chi.sources, chi.target, chi.table, skew=True)
        model.cocycles[name] = CocycleSpec(names["L"], names["M"], names["chi"], names["psi"], NonAbelianCocycle(chi, psi))

    for name, spec in data.get("pairs", {}).items():
        where = f"pairs.{name}"
        beta_name, alpha_name = _need(spec, "beta", where), _need(spec, "alpha", where)
        beta = _lookup(model.maps, beta_name, "map", where)
        alpha = _lookup(model.maps, alpha_name, "map", where)
        L_name = spec.get("L") or _unique_algebra(model, alpha.source, where)
        M_name = spec.get("M") or _unique_algebra(model, beta.source, where)
        L = _lookup(model.brackets, L_name, "bracket", where)
        M = _lookup(model.brackets, M_name, "bracket", where)
        if alpha.source != L.module or alpha.target != L.module or beta.source != M.module or beta.target != M.module:
            raise ModelError(f"{where}: alpha must be an endomorphism of {L.module.name}, beta of {M.module.name}")
        if not is_automorphism(alpha, L):
            raise ModelError(f"{where}: alpha is not an automorphism of {L_name}")
        if not is_automorphism(beta, M):
            raise ModelError(f"{where}: beta is not an automorphism of {M_name}")
        model.pairs[name] = PairSpec(beta_name, alpha_name, L_name, M_name, AutPair(beta, alpha))
    return model


def _unique_algebra(model: Model, module: FreeModule, where: str) -> str:
    names = [k for k, a in model.brackets.items() if a.module == module]
    if len(names) != 1:
        raise ModelError(f"{where}: cannot infer the algebra on {module.name}; give 'L'/'M'")
    return names[0]


def parse_model_text(text: str, source: str = "") -> Model:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{source or 'model'}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_dict(data, source)


def parse_model(path) -> Model:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model_text(text, str(path))


# ---------------------------------------------------------------------------
# rendering


def _render_entries(P: PolyMap, skew_complete: bool) -> dict:
    out = {}
    for t in sorted(P.table):
        if skew_complete and list(t) != sorted(t):
            continue
        out[" ".join(s.basis[i] for s, i in zip(P.sources, t))] = render(P.table[t])
    return out


def model_to_dict(model: Model) -> dict:
    out: dict = {"scalars": model.field.name(), "hopf": model.hopf.describe()}
    out["modules"] = {k: list(m.basis) for k, m in model.modules.items()}
    out["brackets"] = {
        k: {"module": _module_name(model, A.module), "skew_complete": True, "entries": _render_entries(A.bracket, True)}
        for k, A in model.brackets.items()
    }
    out["actions"] = {
        k: {"algebra": alg, "module": _module_name(model, R.module), "entries": _render_entries(R.action, False)}
        for k, (alg, R) in model.actions.items()
    }
    out["cochains"] = {}
    for k, P in model.cochains.items():
        spec = {"sources": [_module_name(model, s) for s in P.sources], "target": _module_name(model, P.target)}
        if P.skew:
            spec["skew_complete"] = True
        spec["entries"] = _render_entries(P, P.skew)
        out["cochains"][k] = spec
    out["maps"] = {
        k: {
            "source": _module_name(model, f.source),
            "target": _module_name(model, f.target),
            "images": {b: render(im) for b, im in zip(f.source.basis, f.images) if im},
        }
        for k, f in model.maps.items()
    }
    out["cocycles"] = {k: {"L": s.L, "M": s.M, "chi": s.chi, "psi": s.psi} for k, s in model.cocycles.items()}
    out["pairs"] = {k: {"beta": s.beta, "alpha": s.alpha, "L": s.L, "M": s.M} for k, s in model.pairs.items()}
    return out


def _module_name(model: Model, module: FreeModule) -> str:
    for k, m in model.modules.items():
        if m == module:
            return k
    raise ModelError(f"module {module.name} is not declared")


def render_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"
