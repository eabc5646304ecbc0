from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tqlab.cartan import build_cartan
from tqlab.checks import kr_target, residue_at_bethe_root, telescoping_cases
from tqlab.qchar import fm_fundamental
from tqlab.scalars import QPoly, QRat, QSeries, RatFunc, q_pow, series_log
from tqlab.sl2lab import f1_closed
from tqlab.spectra import (
    TargetModuleData,
    a_constants,
    eigenvalue_template,
    f_ratio_rational,
    f_series,
    firstpol_eigenvalue,
    telescoping_check,
    template_witnesses,
)
from tqlab.ymono import MixedAnchors, Monomial, Y, point

A1, A2, B2 = build_cartan("A", 1), build_cartan("A", 2), build_cartan("B", 2)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_f_series_matches_kr_closed_form(N):
    assert f_series(A1, kr_target(N), 1, 8) == f1_closed(N, 8)


def test_f_series_log_coefficients():
    m = Y(1, 0, "1")
    lg = series_log(f_series(A1, m, 1, 5))
    for r in range(1, 6):
        assert lg[r] == (q_pow(r) + q_pow(-r)).inv() / r


def test_a_constants():
    assert a_constants(A1, [1]) == (q_pow(Fraction(-1, 2)),)
    assert a_constants(A2, [1, 0]) == (q_pow(Fraction(-2, 3)), q_pow(Fraction(-1, 3)))
    assert a_constants(B2, [0, 1]) == (q_pow(-1), q_pow(-1))


def test_a1_template_shape():
    chi = fm_fundamental(A1, 1, point(0, "1"))
    t = eigenvalue_template(A1, chi, TargetModuleData(A1, kr_target(1)), [1], 4)
    assert t.ht == (0,)
    assert [s.u_exp for s in t.summands] == [(1,), (-1,)]
    assert [s.scalar for s in t.summands] == [q_pow(Fraction(-1, 2)), q_pow(Fraction(1, 2))]
    assert t.summands[0].q_factors == {(1, -1): 1, (1, 1): -1}
    assert t.summands[1].q_factors == {(1, 3): 1, (1, 1): -1}


@pytest.mark.parametrize("case", list(telescoping_cases()), ids=lambda c: c[0])
def test_telescoping(case):
    name, cd, chi, target = case
    data = TargetModuleData(cd, target)
    top, wit = template_witnesses(cd, chi)
    for m in chi.terms:
        ok, where = telescoping_check(cd, top, wit[m], data, 12)
        assert ok, (m, where)


def test_f_ratio_for_single_lowering():
    data = TargetModuleData(A1, Y(1, 0, "1"))
    fr = f_ratio_rational(A1, [(1, point(1, "1"))], data)
    assert fr.v_exp == (-1,)
    assert fr.scalar == q_pow(-1)
    one = QRat(1)
    assert fr.ratfunc == RatFunc(QPoly([-one, one], "z"), QPoly([-q_pow(-2), one], "z"))


def test_firstpol_product_formula():
    data = TargetModuleData(A2, Y(1, 0, "1") * Y(2, 1, "1"))
    s = firstpol_eigenvalue(A2, data, [(1, point(1, "1"))], 1, 6)
    assert s == f_series(A2, data, 1, 6) * QSeries.from_poly([QRat(1), -q_pow(-1)], 6)


@st.composite
def dominant(draw, rank):
    items = draw(st.dictionaries(st.tuples(st.integers(1, rank), st.integers(-3, 3)), st.integers(1, 2),
                                 min_size=1, max_size=3))
    return Monomial({(i, "1", s): e for (i, s), e in items.items()})


@given(st.sampled_from([A1, A2, B2]), st.data())
def test_f_series_multiplicative(cd, data):
    m1, m2 = data.draw(dominant(cd.rank)), data.draw(dominant(cd.rank))
    for i in cd.nodes:
        assert f_series(cd, m1 * m2, i, 6) == f_series(cd, m1, i, 6) * f_series(cd, m2, i, 6)


def test_target_validation():
    with pytest.raises(ValueError):
        TargetModuleData(A1, Y(1, 0, "1", -1))
    with pytest.raises(MixedAnchors):
        TargetModuleData(A1, Y(1, 0, "a") * Y(1, 0, "b"))


@pytest.mark.parametrize("seed", [0, 5, 9])
def test_residue_vanishes_only_at_the_bethe_root(seed):
    assert residue_at_bethe_root(seed) < 1e-9
    assert residue_at_bethe_root(seed, 1.01) > 1e-3
