import pytest
from hypothesis import given, settings, strategies as st

from conftest import F5
from pseudocohom import hopf as H
from pseudocohom.scalars import QQ, FieldError, ScalarField


def test_fields():
    assert F5(7) == F5(2)
    assert F5(1) / F5(3) == F5(2)
    assert QQ(1) / QQ(3) * 3 == QQ(1)
    with pytest.raises(FieldError):
        ScalarField(2)
    with pytest.raises(FieldError):
        ScalarField(9)
    with pytest.raises(FieldError):
        F5("1/5")
    assert ScalarField.parse("F5") == F5 and ScalarField.parse("GF(5)") == F5
    assert ScalarField.parse("Q") == QQ


@pytest.mark.parametrize(
    "h",
    [
        H.trivial(QQ),
        H.cyclic_group(QQ, 3),
        H.cyclic_group(F5, 2),
        H.symmetric_group_s3(QQ),
        H.polynomial(QQ, ["d"]),
        H.polynomial(F5, ["d1", "d2"]),
    ],
    ids=repr,
)
def test_axioms_hold(h):
    assert H.check_axioms(h) == []


def test_group_table_must_be_a_group():
    with pytest.raises(H.HopfError):
        H.group(QQ, ["e", "a"], [["e", "a"], ["a", "a"]])


def test_polynomial_coproduct_is_binomial():
    h = H.polynomial(QQ, ["d"])
    d2 = h.parse("d^2")
    t = H.comul(d2)
    assert H.render_tensor(t) == H.render_tensor(H.comul(h.parse("d")) * H.comul(h.parse("d")))
    assert H.counit(d2) == 0
    assert H.antipode(d2) == d2
    assert H.antipode(h.parse("d")) == -h.parse("d")


def test_group_like_elements():
    h = H.symmetric_group_s3(QQ)
    for g in h.basis():
        x = h.basis_element(g)
        assert H.counit(x) == 1
        assert H.mul(x, H.antipode(x)) == h.unit()


def test_parse_two_terms():
    h = H.polynomial(QQ, ["d1", "d2"])
    x = h.parse("2*d1^2*d2 + 3")
    assert len(x.terms) == 2
    assert x.terms[(2, 1)] == 2 and x.terms[(0, 0)] == 3
    assert h.parse(H.render_element(x)) == x


def test_parse_errors_are_located():
    h = H.polynomial(QQ, ["d"])
    with pytest.raises(Exception, match="col"):
        h.parse("2 * * d")
    with pytest.raises(Exception):
        h.parse("e")


polys = st.lists(
    st.tuples(st.integers(0, 3), st.integers(-3, 3)), min_size=0, max_size=4
)


def _poly(h, spec):
    out = h.element()
    for e, c in spec:
        out = out + h.basis_element((e,)) * QQ(c)
    return out


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_comultiplication_is_multiplicative(a, b):
    h = H.polynomial(QQ, ["d"])
    x, y = _poly(h, a), _poly(h, b)
    assert H.comul(H.mul(x, y)) == H.comul(x) * H.comul(y)
    assert H.counit(H.mul(x, y)) == H.counit(x) * H.counit(y)
