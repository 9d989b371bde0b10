import itertools
import random

import pytest

from conftest import F5
from pseudocohom import catalog, hopf as H
from pseudocohom.cohomology import (
    Cochain0,
    DgLa,
    closure_holds,
    coboundary,
    cohomology_dim,
    nr_bracket,
    nr_bracket_full,
    random_cochain,
    random_g_element,
    shuffles,
)
from pseudocohom.pseudoalg import Representation, StructureError
from pseudocohom.scalars import QQ
from pseudocohom.tensor import FreeModule


def test_shuffle_count_and_signs():
    sh = list(shuffles(2, 2))
    assert len(sh) == 6
    assert sh[0] == ((0, 1), (2, 3), 1)
    assert ((0, 2), (1, 3), -1) in sh


@pytest.mark.parametrize("seed", range(4))
def test_delta_squared_vanishes_over_polynomial_hopf(seed):
    vir = catalog.virasoro(QQ)
    rng = random.Random(seed)
    for n in range(3):
        theta = random_cochain(vir.module, vir.module, n, rng)
        assert not coboundary(coboundary(theta, vir.adjoint()), vir.adjoint())


def test_degree_zero_coboundary_uses_counit():
    A = catalog.sl2(QQ)
    d0 = coboundary(Cochain0(A.module, (QQ(1), QQ(0), QQ(0))), A.adjoint())
    # delta(e)(h) = h . e = 2e, delta(e)(f) = f . e = -h
    assert d0.value((2,)) == A.module.vector(0).scale(QQ(2))
    assert d0.value((1,)) == -A.module.vector(2)


def test_cohomology_dims():
    A = catalog.sl2(QQ)
    k = FreeModule("k", ["one"], A.hopf)
    triv = Representation.trivial(A, k)
    assert [cohomology_dim(triv, n) for n in range(4)] == [1, 0, 0, 1]
    assert [cohomology_dim(A.adjoint(), n) for n in range(3)] == [0, 0, 0]
    L, M, c = catalog.heisenberg_data(F5)
    R = Representation(L, M.module, c.psi)
    assert [cohomology_dim(R, n) for n in range(3)] == [1, 2, 1]


def _dgla():
    L, M, _ = catalog.aff1_semidirect_data(QQ)
    return DgLa(L, M)


def test_nr_bracket_matches_full_evaluation():
    g = _dgla()
    rng = random.Random(5)
    P = random_g_element(g, 1, 1, rng)
    Q = random_g_element(g, 2, 0, rng)
    assert nr_bracket(P, Q) == nr_bracket_full(P, Q)


def _graded_jacobi(a, b, c):
    pa, pb, pc = a.n - 1, b.n - 1, c.n - 1
    s = lambda k: QQ(-1) ** k  # noqa: E731
    return (
        nr_bracket(a, nr_bracket(b, c)).scale(s(pa * pc))
        + nr_bracket(b, nr_bracket(c, a)).scale(s(pb * pa))
        + nr_bracket(c, nr_bracket(a, b)).scale(s(pc * pb))
    )


@pytest.mark.parametrize("seed", range(3))
def test_graded_jacobi_and_antisymmetry(seed):
    g = _dgla()
    rng = random.Random(seed)
    a = random_g_element(g, 1, 0, rng)
    b = random_g_element(g, 1, 1, rng)
    c = random_g_element(g, 2, 0, rng)
    assert not _graded_jacobi(a, b, c)
    sign = QQ(-1) ** ((a.n - 1) * (b.n - 1))
    assert nr_bracket(a, b) == -nr_bracket(b, a).scale(sign)


def test_bidegree_closure():
    g = _dgla()
    rng = random.Random(8)
    for (m, n), (p, q) in itertools.product([(1, 0), (1, 1), (2, 0), (0, 2)], repeat=2):
        f = random_g_element(g, m, n, rng)
        h = random_g_element(g, p, q, rng)
        assert closure_holds(g, f, h)


def test_differential_squares_to_zero_and_is_a_derivation():
    g = _dgla()
    rng = random.Random(9)
    a = random_g_element(g, 1, 0, rng)
    b = random_g_element(g, 1, 1, rng)
    assert not g.d(g.d(a)) and not g.d(g.d(b))
    lhs = g.d(g.bracket(a, b))
    rhs = g.bracket(g.d(a), b) + g.bracket(a, g.d(b)).scale(QQ(-1) ** (a.n - 1))
    assert lhs == rhs


def test_hom_round_trip_and_infinite_hom_basis():
    g = _dgla()
    images = [g.M.module.vector(1)]
    assert g.g0_to_hom(g.hom_to_g0(images)) == images
    assert len(g.hom_basis()) == 2
    vir = catalog.virasoro_semidirect(QQ)
    with pytest.raises(StructureError):
        DgLa(vir[0], vir[1]).hom_basis()


def test_twist_requires_mc():
    L, M, c = catalog.aff1_semidirect_data(QQ)
    g = DgLa(L, M)
    from pseudocohom.nonabelian import cocycle_as_mc

    alpha = cocycle_as_mc(c, g)
    assert g.twist(alpha).twist_by == alpha
    _, _, bad = catalog.aff1_semidirect_data(QQ, corrupted=True)
    with pytest.raises(StructureError):
        g.twist(cocycle_as_mc(bad, g))
    assert H.trivial(QQ) == g.hopf
