"""The twelve acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict (with its wall time) that is
printed in the pytest terminal summary.
"""

import functools
import itertools
import json
import random
import time

import jsonschema
import pytest

from conftest import CRITERIA, F5, FIXTURE_DIR
from pseudocohom import catalog, cli, hopf as H, oracle
from pseudocohom.cohomology import (
    DgLa,
    coboundary,
    cohomology_dim,
    random_cochain,
)
from pseudocohom.model import parse_model, parse_model_text, render_model
from pseudocohom.nonabelian import (
    NonAbelianCocycle,
    SearchConfig,
    apply_equivalence,
    build_extension,
    check_cocycle_equivalence,
    check_extension_equivalence,
    check_nonabelian_cocycle,
    cocycle_as_mc,
    equivalence_map,
    extract_cocycle,
    random_cocycle_candidate,
)
from pseudocohom.pseudoalg import (
    ModuleMap,
    PolyMap,
    Representation,
    check_jacobi,
    check_skew,
    current_pseudoalgebra,
    from_lambda_bracket,
    StructureError,
    is_automorphism,
    lambda_jacobi_defects,
    skew_complete,
    to_lambda_bracket,
)
from pseudocohom.report import REPORT_SCHEMA
from pseudocohom.scalars import QQ
from pseudocohom.tensor import FreeModule, TensorElement
from pseudocohom.wells import (
    AutPair,
    abelian_wells,
    automorphisms,
    check_C_psi,
    check_exact_sequence,
    check_inducible,
    identity_pair,
    tau,
    wells_obstruction,
)

BUDGET = 10.0


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                CRITERIA.append(f"criterion {number}: FAIL  {title} ({time.perf_counter() - start:.1f}s)")
                raise
            elapsed = time.perf_counter() - start
            verdict = "PASS" if elapsed <= BUDGET else "FAIL"
            CRITERIA.append(f"criterion {number}: {verdict}  {title} ({elapsed:.1f}s)")
            assert elapsed <= BUDGET, f"took {elapsed:.1f}s"

        return run

    return wrap


def _mat(module, rows):
    return ModuleMap.from_matrix(module, module, rows)


# ---------------------------------------------------------------------------


@criterion(1, "Hopf axioms on trivial, group and polynomial Hopf algebras")
def test_criterion_01_hopf_axioms():
    algebras = [
        H.trivial(QQ),
        H.trivial(F5),
        H.cyclic_group(QQ, 2),
        H.symmetric_group_s3(QQ),
        H.polynomial(QQ, ["d"]),
        H.polynomial(QQ, ["d1", "d2"]),
    ]
    for h in algebras:
        assert H.check_axioms(h) == [], h


@criterion(2, "delta^2 = 0 on 200 seeded random cochains over h3, sl2 and current sl2 data")
def test_criterion_02_delta_squared():
    L, M, c = catalog.heisenberg_data(QQ)
    h3 = build_extension(c, L, M).algebra
    reps = [
        Representation(L, M.module, c.psi),
        h3.adjoint(),
        catalog.sl2(QQ).adjoint(),
        catalog.cur_sl2_z2(QQ).adjoint(),
    ]
    rng = random.Random(2024)
    nonzero = 0
    for k in range(200):
        R = reps[k % len(reps)]
        n = k % 4
        theta = random_cochain(R.algebra.module, R.module, n, rng)
        d1 = coboundary(theta, R)
        nonzero += bool(d1)
        assert not coboundary(d1, R), (k, n)
    assert nonzero > 50


@criterion(3, "oracle agreement at H = k and classical cohomology dimensions")
def test_criterion_03_oracle():
    g = oracle.ClassicalLieAlgebra.from_constants(QQ, 3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}})
    pseudo = oracle.from_pseudo_algebra(catalog.sl2(QQ))
    assert pseudo.c == g.c
    assert oracle.compare_with_pseudo(g, degree=3, nr_samples=20, seed=1).ok
    assert oracle.compare_with_pseudo(g, oracle.ClassicalRep.trivial(g), degree=3).ok
    rng = random.Random(3)
    lie = 0
    for k in range(100):
        t = oracle.random_skew_table(F5, 3, rng)
        classical, pseudo_fail = oracle.compare_jacobi(t)
        assert classical == pseudo_fail, k
        lie += not classical
        assert oracle.compare_with_pseudo(t, degree=3, nr_samples=1, seed=k).ok, k
    assert 0 < lie < 100
    triv = oracle.ClassicalRep.trivial(g)
    assert [oracle.ce_cohomology_dim(triv, n) for n in (1, 2)] == [0, 0]
    sl2 = catalog.sl2(QQ)
    k1 = FreeModule("k", ["one"], sl2.hopf)
    R = Representation.trivial(sl2, k1)
    assert [cohomology_dim(R, n) for n in (1, 2)] == [0, 0]
    ab = catalog.abelian("L", ["x1", "x2"], H.trivial(QQ))
    assert cohomology_dim(Representation.trivial(ab, k1), 2) == 1
    ab_classical = oracle.ClassicalLieAlgebra.from_constants(QQ, 2, {})
    assert oracle.ce_cohomology_dim(oracle.ClassicalRep.trivial(ab_classical), 2) == 1


@criterion(4, "fixtures pass skew and Jacobi; Virasoro round-trips through the lambda dictionary")
def test_criterion_04_fixtures():
    A, _, ca = catalog.heisenberg_data(QQ)
    algebras = [
        catalog.sl2(QQ),
        catalog.virasoro(QQ),
        catalog.cur_sl2_z2(QQ),
        build_extension(ca, A, _).algebra,
    ]
    L, M, ce = catalog.aff1_semidirect_data(QQ)
    algebras.append(build_extension(ce, L, M).algebra)
    for alg in algebras:
        assert check_skew(alg.bracket).ok, alg
        assert check_jacobi(alg).ok, alg
    vir = catalog.virasoro(QQ)
    table = to_lambda_bracket(vir.bracket)
    assert from_lambda_bracket(vir.module, table) == vir.bracket
    assert lambda_jacobi_defects(table, 1) == []


@criterion(5, "extract after build is the identity; section-shifted rebuilds are equivalent via Theta")
def test_criterion_05_classification():
    for L, M, c in (catalog.heisenberg_data(QQ), catalog.aff1_semidirect_data(QQ)):
        E = build_extension(c, L, M)
        assert extract_cocycle(E) == c
        Mm = M.module
        shifts = [
            [Mm.vector(0)] + [Mm.zero()] * (L.module.rank - 1),
            [Mm.vector(Mm.rank - 1).scale(QQ(2))] * L.module.rank,
        ]
        for images in shifts:
            phi = ModuleMap(L.module, Mm, images)
            c_shift = extract_cocycle(E, phi)
            assert check_nonabelian_cocycle(c_shift, L, M).ok
            E_shift = build_extension(c_shift, L, M)
            theta = equivalence_map(E_shift, E, phi)
            assert check_extension_equivalence(E_shift, E, theta).ok
            assert extract_cocycle(E_shift) == c_shift


def _mc_keys(report, V, from_mc):
    kinds = {"derivation": "C^1,2", "action": "C^2,1", "six-term": "C^3,0"}
    out = set()
    for f in report.findings:
        if from_mc:
            out.add((tuple(f.locator), f.note))
        else:
            idx = sorted(V.index(x) for x in f.locator)
            out.add((tuple(V.basis[i] for i in idx), kinds.get(f.note, f.note)))
    return out


@criterion(6, "MC equation and cocycle identities agree on 100 random candidates over F5")
def test_criterion_06_mc_correspondence():
    T = H.trivial(F5)
    shapes = [
        (catalog.abelian("L", ["x1", "x2"], T), catalog.abelian("M", ["z"], T)),
        (catalog.abelian("L", ["x1", "x2", "x3"], T), catalog.abelian("M", ["z"], T)),
        (catalog.abelian("L", ["x1", "x2"], T), catalog.abelian("M", ["u", "v"], T)),
        (catalog.abelian("L", ["x1", "x2"], T), catalog.aff1(F5, T)),
        (current_pseudoalgebra(["p", "q"], {("p", "q"): {"q": 1}}, T, "L"), catalog.abelian("M", ["u", "v"], T)),
    ]
    rng = random.Random(6)
    passed = failed = 0
    for k in range(100):
        L, M = shapes[0] if k < 40 else shapes[1 + k % 4]
        g = DgLa(L, M)
        c = random_cocycle_candidate(L, M, rng)
        r = check_nonabelian_cocycle(c, L, M)
        m = g.check_mc(cocycle_as_mc(c, g))
        assert r.ok == m.ok, k
        assert _mc_keys(r, g.V, False) == _mc_keys(m, g.V, True), k
        passed += r.ok
        failed += not r.ok
    assert passed and failed


def _random_images(L, M, rng):
    hopf = L.hopf
    labels = hopf.basis() or hopf.monomials(2)
    images = []
    for _ in range(L.module.rank):
        im = M.module.zero()
        for _ in range(rng.randint(0, 2)):
            v = M.module.vector(rng.randrange(M.module.rank), hopf.basis_element(rng.choice(labels)))
            im = im + v.scale(hopf.field(rng.choice([-2, -1, 1, 2])))
        images.append(im)
    return images


@criterion(7, "gauge action matches the equivalence shift on 50 random beta and keeps MC")
def test_criterion_07_gauge():
    data = [
        catalog.heisenberg_data(QQ),
        catalog.aff1_semidirect_data(QQ),
        catalog.virasoro_semidirect(QQ),
        catalog.cur_semidirect(QQ),
    ]
    rng = random.Random(7)
    for k in range(50):
        L, M, c = data[k % len(data)]
        g = DgLa(L, M)
        images = _random_images(L, M, rng)
        beta = g.hom_to_g0(images)
        phi = ModuleMap(L.module, M.module, images)
        moved = g.gauge_transform(cocycle_as_mc(c, g), beta)
        expected = apply_equivalence(c, phi, L, M)
        assert moved == cocycle_as_mc(expected, g), k
        assert g.check_mc(moved).ok, k
        assert check_cocycle_equivalence(expected, c, phi, L, M).ok, k


@criterion(8, "Wells inducibility on h3 over F5 agrees with brute-force enumeration")
def test_criterion_08_inducibility():
    L, M, c = catalog.heisenberg_data(F5)
    E = build_extension(c, L, M)
    diag = _mat(L.module, [[2, 0], [0, 1]])
    good = AutPair(_mat(M.module, [[2]]), diag)
    bad = AutPair(ModuleMap.identity(M.module), diag)
    exhaustive = SearchConfig("exhaustive")

    r = check_inducible(E, good, exhaustive)
    assert r.status == "inducible"
    assert is_automorphism(r.gamma, E.algebra) and tau(E, r.gamma) == good
    r = check_inducible(E, bad, exhaustive)
    assert r.status == "not-inducible"
    assert r.wells.equivalence.mode == "exhaustive" and r.wells.equivalence.searched == 25

    g = oracle.from_pseudo_algebra(E.algebra)
    assert oracle.classical_inducibility(g, 2, [[2]], [[2, 0], [0, 1]])["inducible"] is True
    assert oracle.classical_inducibility(g, 2, [[1]], [[2, 0], [0, 1]])["inducible"] is False


@criterion(9, "Wells exact sequence on h3 over F5 by full enumeration")
def test_criterion_09_exact_sequence():
    L, M, c = catalog.heisenberg_data(F5)
    E = build_extension(c, L, M)
    rep = check_exact_sequence(E)
    assert rep.ok, rep.render()
    assert "kernel of tau has 25 elements" in rep.messages[0]
    assert "image of tau has 480 pairs" in rep.messages[0]
    assert "kernel of W has 480 of 1920 pairs" in rep.messages[0]


def _sections(L, M, count):
    """count distinct maps L -> M over F5, the zero map first."""
    out = []
    for coeffs in itertools.product(range(5), repeat=L.module.rank * M.module.rank):
        images = []
        for i in range(L.module.rank):
            im = M.module.zero()
            for a in range(M.module.rank):
                im = im + M.module.vector(a).scale(F5(coeffs[i * M.module.rank + a]))
            images.append(im)
        out.append(ModuleMap(L.module, M.module, images))
        if len(out) == count:
            return out


@criterion(10, "Wells verdicts do not depend on the section; extracted cocycles differ by s - s'")
def test_criterion_10_section_independence():
    rng = random.Random(10)
    for L, M, c in (catalog.heisenberg_data(F5), catalog.aff1_semidirect_data(F5)):
        E = build_extension(c, L, M)
        sections = _sections(L, M, 5)
        all_pairs = [AutPair(b, a) for b in automorphisms(M) for a in automorphisms(L)]
        pairs = rng.sample(all_pairs, min(12, len(all_pairs)))
        cocycles = [extract_cocycle(E, s) for s in sections]
        for s, cs in zip(sections, cocycles):
            for s2, cs2 in zip(sections, cocycles):
                assert check_cocycle_equivalence(cs, cs2, s - s2, L, M).ok
        statuses = {"zero": 0, "nonzero": 0}
        for p in pairs:
            verdicts = {wells_obstruction(E, p, s).status for s in sections}
            assert len(verdicts) == 1 and "inconclusive" not in verdicts, p.render()
            statuses[verdicts.pop()] += 1
        assert statuses["zero"] > 0


def _random_abelian_instance(rng):
    """Random (L, M, cocycle) with M abelian over F5, plus the list of all pairs."""
    T = H.trivial(F5)
    kind = rng.randrange(3)
    if kind == 0:
        L = catalog.abelian("L", ["x1", "x2"], T)
        M = catalog.abelian("M", ["z"], T)
        acts = [[[rng.randrange(5)]] for _ in range(2)]
    elif kind == 1:
        L = catalog.abelian("L", ["x1", "x2"], T)
        M = catalog.abelian("M", ["u", "v"], T)
        A = [[rng.randrange(5) for _ in range(2)] for _ in range(2)]
        s, t = rng.randrange(5), rng.randrange(5)
        B = [[s * A[i][j] + (t if i == j else 0) for j in range(2)] for i in range(2)]
        acts = [A, B]
    else:
        L = current_pseudoalgebra(["p", "q"], {("p", "q"): {"q": 1}}, T, "L")
        M = catalog.abelian("M", ["u", "v"], T)
        acts = [[[rng.randrange(5) for _ in range(2)] for _ in range(2)], [[0, 0], [0, 0]]]

    Mm = M.module
    psi = {}
    for i, mat in enumerate(acts):
        for b in range(Mm.rank):
            terms = {(((), ()), a): F5(mat[a][b]) for a in range(Mm.rank) if mat[a][b] % 5}
            psi[(i, b)] = TensorElement(Mm, 2, terms)
    psi = PolyMap((L.module, Mm), Mm, psi)
    chi_terms = {(((), ()), a): F5(rng.randrange(5)) for a in range(Mm.rank)}
    chi = skew_complete(L.module, Mm, {(0, 1): TensorElement(Mm, 2, {k: v for k, v in chi_terms.items() if v})}, 2)
    c = NonAbelianCocycle(chi, psi)
    assert check_nonabelian_cocycle(c, L, M).ok
    return L, M, c


@criterion(11, "abelian Wells map agrees with the general obstruction on 50 instances; C_psi gates it")
def test_criterion_11_abelian():
    rng = random.Random(11)
    cache = {}
    gated = agreed = zeros = 0
    for k in range(50):
        L, M, c = _random_abelian_instance(rng)
        E = build_extension(c, L, M)
        key = (L.module.basis, M.module.basis, L.bracket)
        if key not in cache:
            cache[key] = (automorphisms(L), automorphisms(M))
        auts_L, auts_M = cache[key]
        sampled = [AutPair(rng.choice(auts_M), rng.choice(auts_L)) for _ in range(40)]
        inside = [p for p in sampled if check_C_psi(p, c.psi)] or [identity_pair(L, M)]
        outside = [p for p in sampled if not check_C_psi(p, c.psi)]
        p = inside[0]
        res = abelian_wells(E, p)
        w = wells_obstruction(E, p)
        assert w.status != "inconclusive"
        assert res.zero == (w.status == "zero"), k
        zeros += res.zero
        agreed += 1
        if outside:
            q = outside[0]
            with pytest.raises(StructureError, match="outside C_psi"):
                abelian_wells(E, q)
            gated += 1
    assert agreed == 50 and gated > 0 and 0 < zeros < 50


def _cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@criterion(12, "CLI: fixtures load, commands give documented exit codes, JSON validates, round trip holds")
def test_criterion_12_cli(tmp_path, capsys):
    names = ["ab2_h3", "sl2", "virasoro", "cur_sl2_z2", "aff1_semidirect", "h3_f5"]
    for name in names:
        path = FIXTURE_DIR / f"{name}.model"
        model = parse_model(path)
        again = parse_model_text(render_model(model))
        assert again == model, name
        assert render_model(again) == render_model(model)

    # a smaller field keeps the enumerating commands fast
    h3_f3 = tmp_path / "h3_f3.model"
    h3_f3.write_text((FIXTURE_DIR / "h3_f5.model").read_text().replace('"F5"', '"F3"'))
    fx = lambda n: str(FIXTURE_DIR / f"{n}.model")  # noqa: E731
    cases = [
        (["check-algebra", fx("sl2")], 0),
        (["check-algebra", fx("cur_sl2_z2")], 0),
        (["check-rep", fx("sl2")], 0),
        (["check-cocycle", fx("aff1_semidirect"), "--cocycle", "fixE"], 0),
        (["check-cocycle", fx("aff1_semidirect"), "--cocycle", "corrupted"], 1),
        (["extend", fx("ab2_h3"), "--cocycle", "h3"], 0),
        (["extract", fx("ab2_h3"), "--cocycle", "h3", "--section", "s1"], 0),
        (["equiv", fx("h3_f5"), "--cocycle", "h3", "--cocycle", "h3x2"], 1),
        (["equiv", fx("h3_f5"), "--cocycle", "h3", "--cocycle", "h3"], 0),
        (["equiv", fx("ab2_h3"), "--cocycle", "h3", "--cocycle", "h3x2", "--search", "bounded:-1,0,1"], 2),
        (["mc-check", fx("aff1_semidirect"), "--cocycle", "fixE"], 0),
        (["mc-check", fx("aff1_semidirect"), "--cocycle", "corrupted"], 1),
        (["gauge", fx("aff1_semidirect"), "--cocycle", "fixE", "--map", "phi"], 0),
        (["cohomology", fx("sl2"), "--degree", "2"], 0),
        (["cohomology", fx("virasoro")], 2),
        (["wells", fx("h3_f5"), "--pair", "P1"], 1),
        (["wells", fx("h3_f5"), "--pair", "P2"], 0),
        (["induce", fx("h3_f5"), "--pair", "P1"], 1),
        (["induce", fx("h3_f5"), "--pair", "P2", "--seed", "3"], 0),
        (["exact-seq", str(h3_f3)], 0),
        (["oracle-compare", fx("sl2")], 0),
        (["oracle-compare", str(h3_f3)], 0),
        (["oracle-compare", fx("virasoro")], 2),
        (["induce", fx("h3_f5"), "--pair", "nope"], 3),
        (["induce", fx("h3_f5"), "--frobnicate"], 3),
        (["check-algebra", str(tmp_path / "missing.model")], 3),
    ]
    seen = set()
    for k, (args, expected) in enumerate(cases):
        out_json = tmp_path / f"report{k}.json"
        code, out, err = _cli(args + ["--json", str(out_json)], capsys)
        assert code == expected, (args, out, err)
        seen.add(args[0])
        if expected != 3:
            doc = json.loads(out_json.read_text())
            jsonschema.validate(doc, REPORT_SCHEMA)
            assert {"pass": 0, "found": 0, "fail": 1, "not-found": 1, "inconclusive": 2}[doc["verdict"]] == code
    assert seen == set(cli.COMMANDS)

    code, out, _ = _cli(["induce", fx("h3_f5"), "--pair", "P1"], capsys)
    assert "not inducible, exhaustive over 25 candidates" in out
    code, out, _ = _cli(["cohomology", fx("sl2"), "--degree", "2"], capsys)
    assert "dim H^2 = 0" in out

    bad = tmp_path / "bad.model"
    bad.write_text(json.dumps({
        "scalars": "Q",
        "modules": {"L": ["x1", "x2"]},
        "brackets": {"L": {"module": "L", "skew_complete": False,
                           "entries": {"x1 x2": "(1 | 1) x1", "x2 x1": "(1 | 1) x1"}}},
    }))
    code, _, err = _cli(["check-algebra", str(bad)], capsys)
    assert code == 3 and "skew-symmetry violated at ('x2', 'x1')" in err
    broken = tmp_path / "broken.model"
    broken.write_text('{"scalars": "Q",\n  "modules": {"L": ["x1"]\n}')
    code, _, err = _cli(["check-algebra", str(broken)], capsys)
    assert code == 3 and "line 3" in err
