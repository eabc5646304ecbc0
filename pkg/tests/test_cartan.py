from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tqlab.cartan import (
    InvalidType,
    NotInRootCone,
    build_cartan,
    ct_at_power,
    ht_decompose,
    parse_type,
    quantum_cartan,
)
from tqlab.scalars import QRat, q_pow, qint

TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]


def test_b2_uses_long_first_convention():
    cd = build_cartan("B", 2)
    assert cd.C == ((2, -1), (-2, 2))
    assert cd.d == (2, 1)
    assert cd.lacing == 2
    assert cd.dual_coxeter == 3


def test_symmetrized_matrix_is_symmetric():
    for typ, n in TYPES:
        B = build_cartan(typ, n).B
        assert all(B[i][j] == B[j][i] for i in range(n) for j in range(n))


@pytest.mark.parametrize("label", ["G1", "A0", "B1", "X3", "A", "", "E5"])
def test_invalid_labels(label):
    with pytest.raises(InvalidType):
        parse_type(label)


def test_alpha_is_column_of_cartan_matrix():
    cd = build_cartan("B", 2)
    assert tuple(cd.alpha(1)) == (2, -2)
    assert tuple(cd.alpha(2)) == (-1, 2)


@pytest.mark.parametrize("typ,n", TYPES)
def test_quantum_cartan_inverse(typ, n):
    cd = build_cartan(typ, n)
    qc = quantum_cartan(cd)
    for i in range(n):
        for j in range(n):
            s = sum((qc.Cq[i][k] * qc.Cq_inv[k][j] for k in range(n)), QRat(0))
            assert s == QRat(int(i == j))
            assert qc.Bq_inv[i][j] * qint(cd.d[i]) == qc.Cq_inv[j][i]


@pytest.mark.parametrize("typ,n", TYPES)
def test_quantum_cartan_at_q_one(typ, n):
    cd = build_cartan(typ, n)
    qc = quantum_cartan(cd)
    for i in range(n):
        for j in range(n):
            assert qc.Cq[i][j].value_at_one() == cd.C[i][j]
            assert qc.Cq_inv[i][j].value_at_one() == cd.Cinv[i][j]


def test_a1_inverse_closed_form():
    cd = build_cartan("A", 1)
    assert quantum_cartan(cd).ct(1, 1) == (q_pow(1) + q_pow(-1)).inv()
    assert ct_at_power(cd, 1, 1, 3) == (q_pow(3) + q_pow(-3)).inv()


@given(st.sampled_from(TYPES[:6]), st.data())
def test_ht_decompose_roundtrip(tn, data):
    cd = build_cartan(*tn)
    hts = data.draw(st.lists(st.integers(0, 4), min_size=cd.rank, max_size=cd.rank))
    omega = [data.draw(st.integers(-3, 3)) for _ in cd.nodes]
    lam = list(omega)
    for i, h in zip(cd.nodes, hts):
        lam = [a - h * b for a, b in zip(lam, cd.alpha(i))]
    assert ht_decompose(cd, omega, lam) == tuple(hts)


def test_ht_decompose_rejects_outside_cone():
    cd = build_cartan("A", 2)
    with pytest.raises(NotInRootCone):
        ht_decompose(cd, [0, 0], [1, 0])
    with pytest.raises(NotInRootCone):
        ht_decompose(cd, [0, 0], list(cd.alpha(1)))


def test_inverse_is_exact_fraction():
    cd = build_cartan("A", 2)
    assert cd.Cinv[0][0] == Fraction(2, 3)
