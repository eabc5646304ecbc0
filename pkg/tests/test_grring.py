import pytest
from hypothesis import given, strategies as st

from tqlab.cartan import WeightVector, build_cartan
from tqlab.checks import golden
from tqlab.grring import (
    PrefundMultiset,
    TQRelation,
    TQTerm,
    dualize,
    is_lowest_terms,
    normalize_relation_latex,
    tq_relation,
    verify_tq,
)
from tqlab.qchar import fm_fundamental, kr_sl2
from tqlab.ymono import point

PINNED = [("A1", "A", 1, 1, "a"), ("A2", "A", 2, 1, "1"), ("B2", "B", 2, 2, "1")]
SMALL = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2)]


def relation(typ, n, node, anchor="1", shift=0):
    cd = build_cartan(typ, n)
    chi = fm_fundamental(cd, node, point(shift, anchor))
    return cd, chi, tq_relation(cd, chi)


def same(a, b):
    return normalize_relation_latex(a) == normalize_relation_latex(b)


@pytest.mark.parametrize("tag,typ,n,node,anchor", PINNED)
def test_pinned_relations(tag, typ, n, node, anchor):
    cd, chi, rel = relation(typ, n, node, anchor)
    assert same(rel.latex(), golden(f"tq_{tag}.tex"))
    assert verify_tq(cd, rel, chi)
    assert is_lowest_terms(rel)


def test_a1_flavors():
    cd, chi, rel = relation("A", 1, 1, "a")
    assert same(dualize(rel, "swap").latex(), golden("tq_A1_R.tex"))
    assert same(dualize(dualize(rel, "swap"), "dual").latex(), golden("tq_A1_Lminus.tex"))
    assert same(dualize(rel, "dual").latex(), golden("tq_A1_Rminus.tex"))


def test_a2_relation_with_omega_one_fails():
    cd, chi, rel = relation("A", 2, 1)
    *head, last = rel.rhs
    assert tuple(last.weight) == (0, -1)
    wrong = TQRelation(rel.cartan, rel.lhs_label, rel.lhs_prefund,
                         tuple(head) + (TQTerm(WeightVector((-1, 0)), last.prefund, last.coeff),))
    assert not verify_tq(cd, wrong, chi)
    assert not same(rel.latex(), golden("tq_A2_omega1.tex"))
    assert same(wrong.latex(), golden("tq_A2_omega1.tex"))


def test_verify_rejects_tampered_shift():
    cd, chi, rel = relation("B", 2, 2)
    t = rel.rhs[0]
    moved = t.prefund.mapped(lambda k: (k[0], k[1], k[2].shifted(2)))
    bad = TQRelation(rel.cartan, rel.lhs_label, rel.lhs_prefund, (TQTerm(t.weight, moved, t.coeff),) + rel.rhs[1:])
    assert not verify_tq(cd, bad, chi)


@given(st.sampled_from(SMALL), st.integers(-4, 4), st.data())
def test_relations_hold_for_all_fundamentals(tn, shift, data):
    cd = build_cartan(*tn)
    i = data.draw(st.sampled_from(list(cd.nodes)))
    chi = fm_fundamental(cd, i, point(shift))
    rel = tq_relation(cd, chi)
    assert verify_tq(cd, rel, chi)
    assert rel.term_count() == chi.size()
    for mode in ("swap", "dual"):
        assert dualize(dualize(rel, mode), mode) == rel
    assert verify_tq(cd, dualize(rel, "dual"), chi)


@pytest.mark.parametrize("k", range(1, 5))
def test_kr_relations(k):
    cd = build_cartan("A", 1)
    chi = kr_sl2(k, point(0))
    rel = tq_relation(cd, chi)
    assert verify_tq(cd, rel, chi)
    assert len(rel.rhs) == k + 1


def test_json_roundtrip():
    _, _, rel = relation("B", 2, 1)
    assert TQRelation.from_json(rel.to_json()) == rel


def test_prefund_multiset_validation():
    with pytest.raises(ValueError):
        PrefundMultiset({("x", 1, point(0)): 1})
    with pytest.raises(ValueError):
        PrefundMultiset({("+", 1, point(0)): -1})
    with pytest.raises(ValueError):
        tq_relation(build_cartan("A", 1), kr_sl2(1, point(0)), "L-")
