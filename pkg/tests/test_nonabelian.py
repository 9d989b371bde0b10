import random

import pytest

from conftest import F5
from pseudocohom import catalog
from pseudocohom.cohomology import DgLa
from pseudocohom.nonabelian import (
    SearchConfig,
    apply_equivalence,
    build_extension,
    check_cocycle_equivalence,
    check_extension_equivalence,
    check_nonabelian_cocycle,
    cocycle_as_mc,
    equivalence_map,
    extract_cocycle,
    find_equivalence,
    mc_as_cocycle,
    random_cocycle_candidate,
    zero_cocycle,
)
from pseudocohom.pseudoalg import ModuleMap, StructureError, check_algebra
from pseudocohom.scalars import QQ


def test_fixture_cocycles_hold(fix_a, fix_e):
    for L, M, c in (fix_a, fix_e, catalog.virasoro_semidirect(QQ), catalog.cur_semidirect(QQ)):
        assert check_nonabelian_cocycle(c, L, M).ok
        E = build_extension(c, L, M)
        assert check_algebra(E.algebra).ok
        assert extract_cocycle(E) == c


def test_corrupted_cocycle_is_rejected():
    L, M, bad = catalog.aff1_semidirect_data(QQ, corrupted=True)
    rep = check_nonabelian_cocycle(bad, L, M)
    assert not rep.ok
    assert {f.note for f in rep.findings} == {"derivation"}
    with pytest.raises(StructureError):
        build_extension(bad, L, M)


def test_zero_cocycle_gives_direct_sum(fix_e):
    L, M, _ = fix_e
    E = build_extension(zero_cocycle(L, M), L, M)
    assert E.projection().compose(E.section()) == ModuleMap.identity(L.module)
    assert E.projection().compose(E.inclusion()).is_zero()


def test_equivalence_via_phi_and_theta(fix_a):
    L, M, c = fix_a
    phi = ModuleMap(L.module, M.module, [M.module.vector(0), M.module.vector(0).scale(QQ(3))])
    c2 = apply_equivalence(c, phi, L, M)
    assert check_cocycle_equivalence(c2, c, phi, L, M).ok
    assert check_nonabelian_cocycle(c2, L, M).ok
    E, E2 = build_extension(c, L, M), build_extension(c2, L, M)
    assert check_extension_equivalence(E2, E, equivalence_map(E2, E, phi)).ok
    assert check_extension_equivalence(E, E2, equivalence_map(E, E2, -phi)).ok


def test_find_equivalence_modes():
    L, M, c = catalog.heisenberg_data(F5)
    c2 = c.scale(F5(2))
    res = find_equivalence(c, c2, L, M, SearchConfig("exhaustive"))
    assert res.status == "not-equivalent" and res.searched == 25
    assert find_equivalence(c, c2, L, M, SearchConfig("linear")).status == "not-equivalent"
    phi = ModuleMap(L.module, M.module, [M.module.vector(0), M.module.zero()])
    L2, M2, e = catalog.aff1_semidirect_data(F5)
    e2 = apply_equivalence(e, ModuleMap(L2.module, M2.module, [M2.module.vector(1)]), L2, M2)
    res = find_equivalence(e2, e, L2, M2)
    assert res.found and check_cocycle_equivalence(e2, e, res.phi, L2, M2).ok
    assert not phi.is_zero()


def test_bounded_search_is_inconclusive_over_q(fix_a):
    L, M, c = fix_a
    res = find_equivalence(c, c.scale(QQ(2)), L, M, SearchConfig.parse("bounded:-1,0,1"))
    assert res.status == "inconclusive"
    assert find_equivalence(c, c, L, M).found


def test_search_config_parse():
    assert SearchConfig.parse(None).mode == "auto"
    assert SearchConfig.parse("bounded:{-2,2}").coefficients == (-2, 2)
    with pytest.raises(ValueError):
        SearchConfig.parse("random")


@pytest.mark.parametrize("seed", range(3))
def test_mc_translation_round_trip(seed):
    L, M = catalog.abelian("L", ["x1", "x2"], catalog.z2(QQ)), catalog.aff1(QQ, catalog.z2(QQ))
    g = DgLa(L, M)
    c = random_cocycle_candidate(L, M, random.Random(seed))
    assert mc_as_cocycle(cocycle_as_mc(c, g), g) == c
    assert check_nonabelian_cocycle(c, L, M).ok == g.check_mc(cocycle_as_mc(c, g)).ok
