"""Command line interface: ``pseudocohom <command> <model-file> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from .cohomology import DgLa, cohomology_dim
from .hopf import HopfError
from .model import Model, ModelError, parse_model
from .nonabelian import (
    SearchConfig,
    apply_equivalence,
    build_extension,
    check_cocycle_equivalence,
    check_nonabelian_cocycle,
    cocycle_as_mc,
    extract_cocycle,
    find_equivalence,
    ExtensionModel,
    mc_as_cocycle,
)
from .pseudoalg import PolyMap, StructureError, check_jacobi, check_representation, check_skew
from .report import USAGE_ERROR, Report
from .tensor import TensorError, reindex
from .wells import check_exact_sequence, check_inducible, wells_obstruction

COMMANDS = (
    "check-algebra",
    "check-rep",
    "check-cocycle",
    "extend",
    "extract",
    "equiv",
    "mc-check",
    "gauge",
    "cohomology",
    "wells",
    "induce",
    "exact-seq",
    "oracle-compare",
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pseudocohom", description="Checks and constructions for Lie pseudoalgebra models.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("model", help="JSON model file")
    p.add_argument("--bracket", help="bracket name (default: all, or the first where one is needed)")
    p.add_argument("--action", help="action name")
    p.add_argument("--cocycle", action="append", default=[], help="cocycle name; repeat for equiv")
    p.add_argument("--pair", help="automorphism pair name")
    p.add_argument("--section", help="map L -> M defining the section x -> (x, phi(x))")
    p.add_argument("--map", dest="map_name", help="map L -> M used by gauge")
    p.add_argument("--degree", type=int, help="cohomological degree")
    p.add_argument("--search", help="exhaustive | linear | bounded:<c1,c2,...> | auto")
    p.add_argument("--json", dest="json_out", help="write the JSON report to this file ('-' for stdout)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    return p


# ---------------------------------------------------------------------------
# helpers


def _cocycle(model: Model, args):
    """The --cocycle option, or the first declared cocycle (on the pair's algebras when --pair is given)."""
    if len(args.cocycle) > 1:
        raise UsageError("expected one --cocycle")
    if args.cocycle:
        name = args.cocycle[0]
    else:
        names = list(model.cocycles)
        if args.pair:
            p = model.pair(args.pair)
            names = [k for k in names if (model.cocycles[k].L, model.cocycles[k].M) == (p.L, p.M)]
        if not names:
            raise UsageError("model declares no suitable cocycle; pass --cocycle")
        name = names[0]
    spec = model.cocycle(name)
    return name, spec.cocycle, model.algebra(spec.L), model.algebra(spec.M)


def _section(model: Model, args, L, M):
    if not args.section:
        return None
    phi = model.map(args.section)
    if phi.source != L.module or phi.target != M.module:
        raise UsageError(f"section {args.section} must map {L.module.name} to {M.module.name}")
    return phi


def _search(args) -> SearchConfig | None:
    if not args.search:
        return None
    try:
        return SearchConfig.parse(args.search)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _render_table(P: PolyMap) -> str:
    return "; ".join(f"({k}) -> {v}" for k, v in P.render_table().items()) or "0"


def _render_cocycle(c) -> str:
    return f"chi: {_render_table(c.chi)} | psi: {_render_table(c.psi)}"


def _how(res) -> str:
    if res.mode == "linear":
        return "exact linear solve"
    if res.status == "found":
        return f"{res.mode}, found at candidate {res.searched}"
    return f"{res.mode} over {res.searched} candidates"


def _scalar_matrix(f) -> list:
    """Integer matrix of a map over H = F_p."""
    return [[int(e.terms.get((), 0)) for e in row] for row in f.matrix()]


# ---------------------------------------------------------------------------
# commands


def cmd_check_algebra(model: Model, args) -> Report:
    rep = Report("check-algebra")
    names = [args.bracket] if args.bracket else list(model.brackets)
    for name in names:
        A = model.algebra(name)
        rep.extend(check_skew(A.bracket), f"{name} skew")
        rep.extend(check_jacobi(A), f"{name} jacobi")
    rep.messages.append(f"checked {len(names)} bracket(s): {', '.join(names)}")
    return rep


def cmd_check_rep(model: Model, args) -> Report:
    rep = Report("check-rep")
    names = [args.action] if args.action else list(model.actions)
    for name in names:
        rep.extend(check_representation(model.representation(name)), name)
    rep.messages.append(f"checked {len(names)} action(s): {', '.join(names) or 'none'}")
    return rep


def cmd_check_cocycle(model: Model, args) -> Report:
    rep = Report("check-cocycle")
    names = args.cocycle or list(model.cocycles)
    for name in names:
        spec = model.cocycle(name)
        sub = check_nonabelian_cocycle(spec.cocycle, model.algebra(spec.L), model.algebra(spec.M))
        rep.extend(sub, f"{name} ")
        rep.messages.append(f"{name}: {sub.verdict}")
    return rep


def cmd_extend(model: Model, args) -> Report:
    rep = Report("extend")
    name, c, L, M = _cocycle(model, args)
    check = check_nonabelian_cocycle(c, L, M)
    if not check.ok:
        rep.extend(check, "cocycle ")
        return rep
    E = build_extension(c, L, M, validate=False)
    rep.extend(E.validate())
    rep.messages.append(f"extension of {L.name} by {M.name} on basis {', '.join(E.V.basis)}")
    rep.witness = _render_table(E.bracket)
    return rep


def _extension_from_bracket(model: Model, name: str, L, M) -> ExtensionModel:
    A = model.algebra(name)
    layout = DgLa(L, M)
    V = layout.V
    if A.module.rank != V.rank:
        raise UsageError(f"bracket {name} has rank {A.module.rank}, expected {V.rank}")
    mapping = list(range(V.rank))
    table = {t: reindex(T, V, mapping) for t, T in A.bracket.table.items()}
    return ExtensionModel(L, M, PolyMap((V, V), V, table, skew=True))


def cmd_extract(model: Model, args) -> Report:
    rep = Report("extract")
    name, c, L, M = _cocycle(model, args)
    phi_s = _section(model, args, L, M)
    if args.bracket:
        E = _extension_from_bracket(model, args.bracket, L, M)
        v = E.validate()
        if not v.ok:
            rep.extend(v, "extension ")
            return rep
    else:
        E = build_extension(c, L, M)
    c2 = extract_cocycle(E, phi_s)
    rep.extend(check_nonabelian_cocycle(c2, L, M), "extracted ")
    if not args.bracket:
        if phi_s is None:
            if c2 != c:
                rep.fail((), "extracted cocycle differs from the input", "round trip")
        else:
            rep.extend(check_cocycle_equivalence(c2, c, phi_s, L, M), "section shift ")
    rep.witness = _render_cocycle(c2)
    return rep


def cmd_equiv(model: Model, args) -> Report:
    rep = Report("equiv")
    if len(args.cocycle) != 2:
        raise UsageError("equiv needs two --cocycle options")
    s1, s2 = model.cocycle(args.cocycle[0]), model.cocycle(args.cocycle[1])
    if (s1.L, s1.M) != (s2.L, s2.M):
        raise UsageError("cocycles live on different algebras")
    L, M = model.algebra(s1.L), model.algebra(s1.M)
    res = find_equivalence(s1.cocycle, s2.cocycle, L, M, _search(args))
    rep.verdict = {"found": "found", "not-equivalent": "not-found"}.get(res.status, "inconclusive")
    words = {"found": "equivalent", "not-equivalent": "not equivalent"}.get(res.status, "inconclusive")
    rep.messages.append(f"{words}, {_how(res)}")
    rep.messages.extend(n for n in res.notes if n not in rep.messages[-1])
    if res.phi is not None:
        rep.witness = res.phi.render()
    return rep


def cmd_mc_check(model: Model, args) -> Report:
    name, c, L, M = _cocycle(model, args)
    dgla = DgLa(L, M)
    rep = dgla.check_mc(cocycle_as_mc(c, dgla))
    agree = check_nonabelian_cocycle(c, L, M).ok == rep.ok
    rep.messages.append(f"{name}: cocycle identities {'agree' if agree else 'DISAGREE'} with the MC equation")
    if not agree:
        rep.fail((), "MC verdict differs from the cocycle check", "consistency")
    return rep


def cmd_gauge(model: Model, args) -> Report:
    rep = Report("gauge")
    name, c, L, M = _cocycle(model, args)
    if not args.map_name:
        raise UsageError("gauge needs --map")
    phi = model.map(args.map_name)
    if phi.source != L.module or phi.target != M.module:
        raise UsageError(f"map {args.map_name} must go from {L.module.name} to {M.module.name}")
    dgla = DgLa(L, M)
    alpha = cocycle_as_mc(c, dgla)
    beta = dgla.hom_to_g0(phi.images)
    moved = dgla.gauge_transform(alpha, beta)
    if not dgla.check_mc(alpha).ok:
        rep.messages.append("input is not an MC element")
    rep.extend(dgla.check_mc(moved), "transformed ")
    c2 = mc_as_cocycle(moved, dgla)
    expected = apply_equivalence(c, phi, L, M)
    for tag, loc, diff in c2.differences(expected):
        rep.fail((tag,) + tuple(loc), diff, "gauge vs equivalence")
    rep.witness = _render_cocycle(c2)
    return rep


def cmd_cohomology(model: Model, args) -> Report:
    rep = Report("cohomology")
    if args.action:
        R = model.representation(args.action)
        label = args.action
    else:
        name = args.bracket or next(iter(model.brackets), None)
        if name is None:
            raise UsageError("model has no brackets")
        R = model.algebra(name).adjoint()
        label = f"adjoint of {name}"
    if not R.algebra.hopf.is_finite:
        rep.verdict = "inconclusive"
        rep.messages.append("cochain spaces are infinite dimensional for polynomial H")
        return rep
    degrees = [args.degree] if args.degree is not None else [0, 1, 2]
    if any(d < 0 for d in degrees):
        raise UsageError("degree must be nonnegative")
    rep.messages.append(f"coefficients: {label}")
    for n in degrees:
        rep.messages.append(f"dim H^{n} = {cohomology_dim(R, n)}")
    return rep


def _pair(model: Model, args, L_name, M_name):
    if not args.pair:
        raise UsageError("--pair is required")
    spec = model.pair(args.pair)
    if (spec.L, spec.M) != (L_name, M_name):
        raise UsageError(f"pair {args.pair} acts on ({spec.L}, {spec.M}), not ({L_name}, {M_name})")
    return spec.pair


def cmd_wells(model: Model, args) -> Report:
    rep = Report("wells")
    name, c, L, M = _cocycle(model, args)
    spec = model.cocycle(name)
    pair = _pair(model, args, spec.L, spec.M)
    E = build_extension(c, L, M)
    w = wells_obstruction(E, pair, _section(model, args, L, M), _search(args))
    eq = w.equivalence
    if w.status == "zero":
        rep.messages.append(f"W = 0, witness found ({_how(eq)})")
        rep.witness = w.phi.render()
    elif w.status == "nonzero":
        rep.fail((), f"transformed cocycle {_render_cocycle(w.transformed)}", "W != 0")
        rep.messages.append(f"W != 0, {_how(eq)}")
    else:
        rep.verdict = "inconclusive"
        rep.messages.append(f"no witness found, {_how(eq)}")
    return rep


def cmd_induce(model: Model, args) -> Report:
    rep = Report("induce")
    name, c, L, M = _cocycle(model, args)
    spec = model.cocycle(name)
    pair = _pair(model, args, spec.L, spec.M)
    E = build_extension(c, L, M)
    res = check_inducible(E, pair, _search(args), _section(model, args, L, M))
    rep.verdict = res.verdict
    eq = res.wells.equivalence
    if res.status == "inducible":
        rep.messages.append(f"inducible, lift verified ({_how(eq)})")
        rep.witness = res.gamma.render()
    elif res.status == "not-inducible":
        rep.messages.append(f"not inducible, {_how(eq)}")
    else:
        rep.messages.append(f"inconclusive, {_how(eq)}")
    return rep


def cmd_exact_seq(model: Model, args) -> Report:
    name, c, L, M = _cocycle(model, args)
    E = build_extension(c, L, M)
    return check_exact_sequence(E, _section(model, args, L, M), _search(args))


def cmd_oracle_compare(model: Model, args) -> Report:
    from . import oracle

    rep = Report("oracle-compare")
    if model.hopf.kind != "trivial":
        rep.verdict = "inconclusive"
        rep.messages.append("the classical oracle only covers H = k")
        return rep
    degree = 3 if args.degree is None else args.degree
    names = [args.bracket] if args.bracket else list(model.brackets)
    for name in names:
        g = oracle.from_pseudo_algebra(model.algebra(name))
        sub = oracle.compare_with_pseudo(g, degree=degree, nr_samples=10, seed=args.seed)
        rep.extend(sub, f"{name} ")
        classical, pseudo = oracle.compare_jacobi(g)
        if classical != pseudo:
            rep.fail((name,), f"Jacobi failures {classical} vs {pseudo}", "jacobi")
        rep.messages.append(f"{name}: coboundary and NR comparisons {sub.verdict}, Jacobi sets agree: {classical == pseudo}")
    for pname, spec in model.pairs.items():
        cocycles = [k for k, s in model.cocycles.items() if (s.L, s.M) == (spec.L, spec.M)]
        if not cocycles or not model.field.is_finite:
            continue
        cs = model.cocycle(cocycles[0])
        L, M = model.algebra(cs.L), model.algebra(cs.M)
        E = build_extension(cs.cocycle, L, M)
        if E.V.rank > 3:
            continue
        g = oracle.from_pseudo_algebra(E.algebra)
        beta = _scalar_matrix(spec.pair.beta)
        alpha = _scalar_matrix(spec.pair.alpha)
        classical = oracle.classical_inducibility(g, E.nL, beta, alpha)["inducible"]
        main = check_inducible(E, spec.pair).status
        agree = (main == "inducible") == classical and main != "inconclusive"
        rep.messages.append(f"pair {pname} on {cocycles[0]}: wells {main}, enumeration {'inducible' if classical else 'not inducible'}")
        if not agree:
            rep.fail((pname,), f"wells {main} vs enumeration {classical}", "inducibility")
    return rep


HANDLERS = {
    "check-algebra": cmd_check_algebra,
    "check-rep": cmd_check_rep,
    "check-cocycle": cmd_check_cocycle,
    "extend": cmd_extend,
    "extract": cmd_extract,
    "equiv": cmd_equiv,
    "mc-check": cmd_mc_check,
    "gauge": cmd_gauge,
    "cohomology": cmd_cohomology,
    "wells": cmd_wells,
    "induce": cmd_induce,
    "exact-seq": cmd_exact_seq,
    "oracle-compare": cmd_oracle_compare,
}


def run(command: str, model: Model, args) -> Report:
    return HANDLERS[command](model, args)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        model = parse_model(args.model)
        report = run(args.command, model, args)
    except (UsageError, ModelError, StructureError, TensorError, HopfError) as exc:
        print(f"pseudocohom: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.json_out == "-":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.render())
        if args.json_out:
            with open(args.json_out, "w") as fh:
                json.dump(report.to_json(), fh, indent=2)
                fh.write("\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
