import pytest

from pseudocohom import hopf as H
from pseudocohom.scalars import QQ
from pseudocohom.tensor import (
    FreeModule,
    TensorError,
    act,
    canonicalize,
    parse_tensor,
    permute_legs,
    render,
    splice,
    substitute,
    variable,
)

HD = H.polynomial(QQ, ["d"])
M = FreeModule("M", ["u", "v"], HD)


def test_canonical_form_moves_last_leg():
    # (1 (x) 1) (x)_H d u  =  Delta(d) (x)_H u
    F = H.HopfTensor(HD, 2, {((0,), (0,)): QQ(1)})
    T = canonicalize([(F, M.vector(0, HD.parse("d")))], M, 2)
    assert T == parse_tensor("(d | 1) u + (1 | d) u", M, 2)


def test_render_parse_round_trip():
    T = parse_tensor("2*(d^2 | 1) u - (1 | d) v + (d | d) u", M, 2)
    assert parse_tensor(render(T), M, 2) == T
    assert parse_tensor("0", M, 2) == M.zero(2)


def test_parse_rejects_unknown_vector():
    with pytest.raises(Exception):
        parse_tensor("(1 | 1) w", M, 2)


def test_permute_legs_is_an_action():
    T = parse_tensor("(d^2 | d | 1) u", M, 3)
    p, q = (1, 2, 0), (2, 0, 1)
    once = permute_legs(q, permute_legs(p, T))
    composed = tuple(q[p[k]] for k in range(3))
    assert once == permute_legs(composed, T)
    with pytest.raises(TensorError):
        permute_legs((0, 0, 1), T)


def test_act_and_splice():
    T = parse_tensor("(1 | 1) u", M, 2)
    F = H.HopfTensor(HD, 2, {((1,), (0,)): QQ(1)})
    assert act(F, T) == parse_tensor("(d | 1) u", M, 2)
    G = H.HopfTensor(HD, 2, {((0,), (0,)): QQ(1)})
    T1 = parse_tensor("(d | 1) u", M, 2)
    assert splice(G, T1, 0) == parse_tensor("(d | 1 | 1) u + (1 | d | 1) u", M, 3)


def test_substitute_sorts_labels():
    B = {(1, 0): parse_tensor("(d | 1) u", M, 2)}
    x, y = variable(M, 0, "x"), variable(M, 1, "y")
    got = substitute(lambda t: B.get(t), [y, x], M)
    assert got.labels == ("x", "y")
    assert got.tensor == parse_tensor("(1 | d) u", M, 2)
    with pytest.raises(TensorError):
        substitute(lambda t: B.get(t), [x, x], M)
