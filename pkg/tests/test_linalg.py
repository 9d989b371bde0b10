from hypothesis import given, settings, strategies as st

from conftest import F5
from pseudocohom.linalg import inverse, mat_mul, nullspace, rank, solve, solve_sparse
from pseudocohom.scalars import QQ


def test_rank_and_nullspace():
    m = [[QQ(1), QQ(2), QQ(3)], [QQ(2), QQ(4), QQ(6)]]
    assert rank(m, QQ) == 1
    ns = nullspace(m, QQ)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_solve_inconsistent():
    m = [[F5(1), F5(1)], [F5(2), F5(2)]]
    assert solve(m, [F5(1), F5(3)], F5) is None
    x = solve(m, [F5(1), F5(2)], F5)
    assert x[0] + x[1] == F5(1)


matrices = st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_dense_and_sparse_solvers_agree(rows, rhs):
    m = [[F5(v) for v in r] for r in rows]
    b = [F5(v) for v in rhs]
    dense = solve(m, b, F5)
    sparse = solve_sparse([{j: v for j, v in enumerate(r) if v} for r in m], b, 3, F5)
    assert (dense is None) == (sparse is None)
    if sparse is not None:
        assert [sum((r[j] * sparse[j] for j in range(3)), F5.zero) for r in m] == b
    inv = inverse(m, F5)
    assert (inv is not None) == (rank(m, F5) == 3)
    if inv is not None:
        assert mat_mul(m, inv, F5) == [[F5(int(i == j)) for j in range(3)] for i in range(3)]
