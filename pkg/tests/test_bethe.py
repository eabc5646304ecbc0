import cmath

import pytest
from hypothesis import given, strategies as st

from tqlab.bethe import (
    NotSingleRoot,
    bethe_system,
    closed_root_is_exact,
    sl2_kr_zeros,
    solve_closed_single,
    solve_numeric,
)
from tqlab.cartan import build_cartan
from tqlab.checks import expected_bethe_root
from tqlab.scalars import QRat, q_pow
from tqlab.sl2lab import transfer_sl2
from tqlab.spectra import TargetModuleData
from tqlab.ymono import Y

A1 = build_cartan("A", 1)


def single():
    return bethe_system(A1, sl2_kr_zeros([(-1, 1)]), [1])


def test_single_equation_shape():
    (eq,) = single().equations
    assert not eq.rhs
    pref = QRat(1)
    for f in eq.lhs:
        pref = pref * f.pref
    assert pref == q_pow(1)
    assert [f.cn for f in eq.lhs] == [q_pow(-2)]
    assert [f.cd for f in eq.lhs] == [QRat(1)]


def test_closed_root():
    w = solve_closed_single(single())
    assert w == expected_bethe_root()
    assert closed_root_is_exact(single().equations[0], w)
    q = q_pow(1)
    assert w.num(q * q) / w.den(q * q) == (1 + q + q * q).inv()
    assert w.num(QRat(0)) / w.den(QRat(0)) == QRat(1)


def test_closed_root_is_the_baxter_root():
    R = transfer_sl2(1, 6)
    c0, c1 = R.reconstruct()[1]
    assert -(c0 / c1) == solve_closed_single(single())


def test_numeric_single_root_matches_closed_form():
    w = solve_closed_single(single())
    q0, v0 = 1.2 * cmath.exp(0.3j), 0.4 - 0.1j
    sols = solve_numeric(single(), q0, v0)
    assert len(sols) == 1
    (root,) = sols[0].roots.values()
    num = sum(complex(c.eval(q0)) * v0**k for k, c in enumerate(w.num.coeffs))
    den = sum(complex(c.eval(q0)) * v0**k for k, c in enumerate(w.den.coeffs))
    assert abs(root - num / den) < 1e-10


def test_two_roots_against_resultant_oracle():
    sympy = pytest.importorskip("sympy")
    q, v = sympy.Rational(6, 5), sympy.Rational(7, 10)
    w1, w2 = sympy.symbols("w1 w2")
    b, R = q**-1, 2

    def cleared(wk, ws):
        lhs_n, lhs_d = v * q**R * (wk - b * q**-R), wk - b * q**R
        rhs_n, rhs_d = q**2 * (wk - ws * q**-2), wk - ws * q**2
        return sympy.expand(lhs_n * rhs_d - rhs_n * lhs_d)

    E1, E2 = cleared(w1, w2), cleared(w2, w1)
    D = sympy.cancel((E1 - E2) / (w1 - w2))
    res = sympy.Poly(sympy.resultant(E1, D, w2), w1)
    assert res.monic() == sympy.Poly(648 * w1**2 - 2257 * w1 - 41625, w1).monic()
    oracle = sorted(complex(r).real for r in res.nroots())
    assert oracle == pytest.approx([-6.46025431530711, 9.94327900666514], abs=1e-12)

    sys = bethe_system(A1, sl2_kr_zeros([(-1, 2)]), [2])
    sols = solve_numeric(sys, 1.2, 0.7)
    assert len(sols) == 1
    got = sorted(sols[0].roots.values(), key=lambda z: z.real)
    assert all(abs(g - o) < 1e-9 for g, o in zip(got, oracle))
    assert max(sols[0].residuals) < 1e-9


def test_solver_is_deterministic():
    sys = bethe_system(A1, sl2_kr_zeros([(-1, 2)]), [2])
    a = [s.to_json() for s in solve_numeric(sys, 1.2, 0.7)]
    b = [s.to_json() for s in solve_numeric(sys, 1.2, 0.7)]
    assert a == b


def test_relabeling_symmetry():
    sys = bethe_system(A1, sl2_kr_zeros([(-1, 2), (0, 1)]), [3])
    assert sys.relabeled({(1, 1): (1, 2), (1, 2): (1, 1)}) == sys.equation_set()
    assert sys.relabeled({(1, 1): (1, 3), (1, 3): (1, 1)}) == sys.equation_set()


def test_a2_system_cross_terms():
    cd = build_cartan("A", 2)
    data = TargetModuleData(cd, Y(1, 0, "1"))
    sys = bethe_system(cd, data, [1, 1])
    assert len(sys.equations) == 2
    e1 = next(e for e in sys.equations if e.i == 1)
    assert len(e1.lhs) == 1 and len(e1.rhs) == 1
    assert e1.rhs[0].other == (2, 1)
    assert e1.rhs[0].pref == q_pow(-1)
    e2 = next(e for e in sys.equations if e.i == 2)
    assert not e2.lhs


def test_nontwisted_preset_matches_closed_equation():
    q0 = 1.25 * cmath.exp(0.2j)
    v0 = q0 * q0
    sys = bethe_system(A1, sl2_kr_zeros([(-1, 2)]), [2])
    w = {(1, 1): 0.3 + 0.7j, (1, 2): -1.1 + 0.2j}
    for e in sys.equations:
        wk, ws = w[(1, e.k)], w[(1, 3 - e.k)]
        lhs = v0 * q0**2 * (wk - q0**-3) / (wk - q0)
        rhs = q0**2 * (wk - ws * q0**-2) / (wk - ws * q0**2)
        assert abs(e.residual(w, q0, [v0]) - (lhs - rhs)) < 1e-12


def test_empty_and_invalid_systems():
    assert bethe_system(A1, sl2_kr_zeros([(-1, 1)]), [0]).equations == []
    assert solve_numeric(bethe_system(A1, {}, [0]), 1.2, 0.5)[0].roots == {}
    with pytest.raises(ValueError):
        bethe_system(A1, {}, [-1])
    with pytest.raises(NotSingleRoot):
        solve_closed_single(bethe_system(A1, sl2_kr_zeros([(-1, 2)]), [2]))


@given(st.floats(1.1, 1.4), st.floats(-0.6, 0.6), st.floats(0.1, 0.9), st.floats(-3, 3))
def test_closed_root_solves_numeric_equation(r, th, vr, vt):
    q0, v0 = cmath.rect(r, th), cmath.rect(vr, vt)
    w = solve_closed_single(single())
    num = sum(complex(c.eval(q0)) * v0**k for k, c in enumerate(w.num.coeffs))
    den = sum(complex(c.eval(q0)) * v0**k for k, c in enumerate(w.den.coeffs))
    (eq,) = single().equations
    assert abs(eq.residual({(1, 1): num / den}, q0, [v0])) < 1e-9
