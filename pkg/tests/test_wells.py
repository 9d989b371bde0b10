import random

import pytest

from conftest import F5
from pseudocohom import catalog, oracle
from pseudocohom.nonabelian import SearchConfig, build_extension
from pseudocohom.pseudoalg import ModuleMap, StructureError, is_automorphism
from pseudocohom.scalars import QQ
from pseudocohom.wells import (
    AutPair,
    abelian_wells,
    automorphisms,
    automorphisms_preserving_M,
    check_C_psi,
    check_crossed_homomorphism,
    check_inducible,
    construct_lift,
    general_linear,
    identity_pair,
    make_pair,
    shear,
    tau,
    transform_cocycle,
    wells_obstruction,
)


def _mat(m, rows):
    return ModuleMap.from_matrix(m, m, rows)


@pytest.fixture(scope="module")
def h3():
    L, M, c = catalog.heisenberg_data(F5)
    return build_extension(c, L, M)


def test_group_orders(h3):
    assert len(general_linear(h3.L.module)) == 480
    assert len(automorphisms(h3.M)) == 4
    aff = catalog.aff1(F5, h3.L.hopf)
    # a -> a + s b, b -> t b with t != 0
    assert len(automorphisms(aff)) == 20


def test_tau_of_shear_is_identity(h3):
    phi = ModuleMap(h3.L.module, h3.M.module, [h3.M.module.vector(0), h3.M.module.zero()])
    gamma = shear(h3, phi)
    assert is_automorphism(gamma, h3.algebra)
    assert tau(h3, gamma) == identity_pair(h3.L, h3.M)


def test_obstruction_tracks_determinant(h3):
    # chi is a volume form, so (beta, alpha) lifts iff beta = det(alpha)
    for beta, alpha in [(1, [[1, 1], [0, 1]]), (2, [[2, 0], [0, 1]]), (4, [[0, 1], [1, 0]]), (1, [[3, 0], [0, 2]])]:
        pair = make_pair(_mat(h3.M.module, [[beta]]), _mat(h3.L.module, alpha), h3.L, h3.M)
        det = F5(alpha[0][0] * alpha[1][1] - alpha[0][1] * alpha[1][0])
        w = wells_obstruction(h3, pair)
        assert (w.status == "zero") == (det == F5(beta))
        res = check_inducible(h3, pair, SearchConfig("exhaustive"))
        assert (res.status == "inducible") == (det == F5(beta))
        if res.gamma is not None:
            assert tau(h3, res.gamma) == pair


def test_make_pair_validates(h3):
    with pytest.raises(StructureError):
        make_pair(_mat(h3.M.module, [[0]]), ModuleMap.identity(h3.L.module), h3.L, h3.M)


def test_construct_lift_rejects_bad_witness(h3):
    pair = AutPair(ModuleMap.identity(h3.M.module), _mat(h3.L.module, [[2, 0], [0, 1]]))
    with pytest.raises(StructureError):
        construct_lift(h3, pair, ModuleMap.zero(h3.L.module, h3.M.module))


def test_lifts_match_oracle(h3):
    lifts = automorphisms_preserving_M(h3)
    assert len(lifts) == 12000
    g = oracle.from_pseudo_algebra(h3.algebra)
    out = oracle.classical_inducibility(g, 2, [[1]], [[1, 0], [0, 1]])
    assert out["automorphisms"] == 12000 and len(out["lifts"]) == 25


def test_transform_is_an_action():
    L, M, c = catalog.aff1_semidirect_data(F5)
    pairs = [AutPair(b, a) for b in automorphisms(M) for a in automorphisms(L)]
    rng = random.Random(4)
    for _ in range(10):
        p, q = rng.choice(pairs), rng.choice(pairs)
        assert check_crossed_homomorphism(c, p, q)
    assert transform_cocycle(c, identity_pair(L, M)) == c


def test_abelian_wells_requires_abelian_kernel_and_finite_h():
    L, M, c = catalog.aff1_semidirect_data(F5)
    E = build_extension(c, L, M)
    with pytest.raises(StructureError, match="abelian"):
        abelian_wells(E, identity_pair(L, M))
    L, M, c = catalog.heisenberg_data(QQ)
    E = build_extension(c, L, M)
    pair = AutPair(_mat(M.module, [[2]]), _mat(L.module, [[2, 0], [0, 1]]))
    assert check_C_psi(pair, c.psi)
    res = abelian_wells(E, pair)
    assert res.zero and res.witness is not None
    assert not abelian_wells(E, AutPair(_mat(M.module, [[3]]), pair.alpha)).zero
