from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tqlab.cartan import build_cartan
from tqlab.scalars import QRat, q_pow
from tqlab.ymono import (
    MixedAnchors,
    Monomial,
    Y,
    a_monomial,
    eval_ell_weight,
    is_dominant,
    parse_monomial_latex,
    parse_qchar_latex,
    point,
    weight_of,
)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 3), ("G", 2)]


@st.composite
def monomials(draw, rank=2, anchor="1"):
    items = draw(st.dictionaries(
        st.tuples(st.integers(1, rank), st.integers(-4, 4)),
        st.integers(-2, 2).filter(bool),
        max_size=4,
    ))
    return Monomial({(i, anchor, s): e for (i, s), e in items.items()})


def test_a_monomials_in_b2():
    cd = build_cartan("B", 2)
    a = point(0, "a")
    assert a_monomial(cd, 1, a) == Y(1, -2) * Y(1, 2) * Y(2, -1, power=-1) * Y(2, 1, power=-1)
    assert a_monomial(cd, 2, a) == Y(2, -1) * Y(2, 1) * Y(1, 0, power=-1)


@pytest.mark.parametrize("typ,n", TYPES)
def test_weight_of_a_is_alpha(typ, n):
    cd = build_cartan(typ, n)
    for i in cd.nodes:
        assert tuple(weight_of(a_monomial(cd, i, point(3)), cd)) == tuple(cd.alpha(i))


@given(monomials(), monomials())
def test_group_laws(m1, m2):
    assert (m1 * m2) / m2 == m1
    assert m1 * m1.inv() == Monomial()
    assert (m1 * m2).shifted(2) == m1.shifted(2) * m2.shifted(2)


@given(monomials(), monomials())
def test_ell_weight_is_multiplicative(m1, m2):
    cd = build_cartan("A", 2)
    assert eval_ell_weight(cd, m1 * m2) == eval_ell_weight(cd, m1) * eval_ell_weight(cd, m2)
    K = 6
    s12 = eval_ell_weight(cd, m1 * m2).series(K)
    s1, s2 = eval_ell_weight(cd, m1).series(K), eval_ell_weight(cd, m2).series(K)
    assert all(s12[i] == s1[i] * s2[i] for i in range(cd.rank))


def test_ell_weight_of_y_at_zero_and_infinity():
    cd = build_cartan("B", 2)
    ew = eval_ell_weight(cd, Y(1, 0, "1"))
    s = ew.series(3)[0]
    assert s[0] == q_pow(2)
    assert s[1] == q_pow(2) * (q_pow(2) - q_pow(-2))
    assert ew.series(3)[1][0] == QRat(1)


def test_mixed_anchors_rejected():
    cd = build_cartan("A", 1)
    with pytest.raises(MixedAnchors):
        eval_ell_weight(cd, Y(1, 0, "a") * Y(1, 0, "b"))


@given(monomials(anchor="a"))
def test_latex_roundtrip(m):
    assert parse_monomial_latex(m.latex()) == m


def test_parse_variants():
    assert parse_monomial_latex("Y_{1,q^2}^{-1}") == Y(1, 2, "1", -1)
    assert parse_monomial_latex("Y_{2,aq^{-3}}Y_{1,a}") == Y(2, -3) * Y(1, 0)
    assert parse_monomial_latex("Y_{1,q^{1/2}}") == Y(1, Fraction(1, 2), "1")
    chi = parse_qchar_latex("Y_{1,a} + 2Y_{1,aq^2}^{-1}")
    assert chi.terms == {Y(1, 0): 1, Y(1, 2, power=-1): 2}


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_monomial_latex("Y_{1,a} + junk")


def test_dominance():
    assert is_dominant(Y(1, 0) * Y(2, 3))
    assert not is_dominant(Y(1, 0) * Y(2, 3, power=-1))
