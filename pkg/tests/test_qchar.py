from math import comb

import pytest
from hypothesis import given, strategies as st

from tqlab.cartan import build_cartan
from tqlab.checks import golden
from tqlab.qchar import (
    BudgetExceeded,
    FMConfig,
    UnsupportedType,
    dominant_monomials,
    fm_fundamental,
    kr_sl2,
    neg_prefund_sl2,
)
from tqlab.ymono import Monomial, Y, a_monomial, parse_qchar_latex, point, weight_of


def weyl_orbit(cd, lam):
    """Weights of a minuscule module: closure of lam under simple reflections."""
    seen, todo = {tuple(lam)}, [tuple(lam)]
    while todo:
        w = todo.pop()
        for i in cd.nodes:
            r = tuple(a - w[i - 1] * b for a, b in zip(w, cd.alpha(i)))
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def weight_multiset(cd, chi):
    out = {}
    for m, c in chi.items():
        w = tuple(weight_of(m, cd))
        out[w] = out.get(w, 0) + c
    return out


@pytest.mark.parametrize("tag,typ,n,node,anchor", [
    ("A1", "A", 1, 1, "a"), ("A2", "A", 2, 1, "1"), ("B2", "B", 2, 2, "1"),
])
def test_pinned_characters(tag, typ, n, node, anchor):
    cd = build_cartan(typ, n)
    chi = fm_fundamental(cd, node, point(0, anchor))
    assert chi == parse_qchar_latex(golden(f"qchar_{tag}.tex"))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_type_a_fundamentals_match_weyl_orbits(n):
    cd = build_cartan("A", n)
    for k in cd.nodes:
        chi = fm_fundamental(cd, k, point(0))
        assert len(chi) == comb(n + 1, k)
        ws = weight_multiset(cd, chi)
        assert set(ws) == weyl_orbit(cd, cd.omega(k))
        assert set(ws.values()) == {1}


def test_b2_fundamentals():
    cd = build_cartan("B", 2)
    spin = fm_fundamental(cd, 2, point(0))
    assert weight_multiset(cd, spin) == {w: 1 for w in weyl_orbit(cd, cd.omega(2))}
    vec = weight_multiset(cd, fm_fundamental(cd, 1, point(0)))
    expected = {w: 1 for w in weyl_orbit(cd, cd.omega(1))}
    expected[(0, 0)] = 1
    assert vec == expected


def test_a2_conjugate_fundamental_ends_at_dual_point():
    cd = build_cartan("A", 2)
    chi = fm_fundamental(cd, 1, point(0))
    assert Y(2, 3, power=-1) in chi.terms
    assert dominant_monomials(chi) == [(Y(1, 0), 1)]


@given(st.sampled_from([("A", 2), ("A", 3), ("B", 2)]), st.integers(-5, 5), st.data())
def test_shift_equivariance(tn, s, data):
    cd = build_cartan(*tn)
    i = data.draw(st.sampled_from(list(cd.nodes)))
    assert fm_fundamental(cd, i, point(s)) == fm_fundamental(cd, i, point(0)).shifted(s)


@pytest.mark.parametrize("k", range(7))
def test_kr_strings(k):
    cd = build_cartan("A", 1)
    a = point(0)
    chi = kr_sl2(k, a)
    assert len(chi) == k + 1
    weights = sorted(weight_of(m, cd)[0] for m in chi.terms)
    assert weights == list(range(-k, k + 1, 2))


def test_kr_one_is_shifted_fundamental():
    cd = build_cartan("A", 1)
    a = point(0)
    assert kr_sl2(1, a) == fm_fundamental(cd, 1, a.shifted(-1))


def test_kr_two_explicit():
    a = point(0)
    chi = kr_sl2(2, a)
    top = Y(1, -1) * Y(1, -3)
    cd = build_cartan("A", 1)
    second = top * a_monomial(cd, 1, a).inv()
    assert second == Y(1, -3) * Y(1, 1, power=-1)
    assert set(chi.terms) == {top, second, Y(1, 1, power=-1) * Y(1, -1, power=-1)}


def test_negative_prefundamental_truncation():
    t = neg_prefund_sl2(point(0), 3)
    assert len(t) == 4 and t.truncated
    assert Monomial() in t.terms
    with pytest.raises(TypeError):
        _ = t + kr_sl2(1, point(0))


def test_unsupported_types_refuse():
    for typ, n in (("C", 3), ("G", 2), ("D", 4), ("B", 3)):
        with pytest.raises(UnsupportedType):
            fm_fundamental(build_cartan(typ, n), 1, point(0))


def test_budget():
    with pytest.raises(BudgetExceeded):
        fm_fundamental(build_cartan("A", 4), 2, point(0), FMConfig(max_monomials=3))
