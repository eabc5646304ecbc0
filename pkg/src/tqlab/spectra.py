"""Eigenvalue side: universal factors f_i(z), constants a_i, the Q-ratio template.

Spectral points of the target module W and of the auxiliary module V are
each taken on a single anchor normalized to 1, so every point is a power
of q and every object below is exact over QRat.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import CartanDatum, WeightVector, ct_at_power, ht_decompose
from .qchar import fm_expand, witness_product
from .scalars import QPoly, QRat, QSeries, RatFunc, q_pow, series_exp, series_log
from .ymono import Monomial, MixedAnchors, QCharacter, a_monomial, is_dominant


class NoWitness(ValueError):
    pass


class PoleAtEvaluationPoint(ZeroDivisionError):
    pass


def _single_anchor(m: Monomial, what: str):
    if len(m.anchors()) > 1:
        raise MixedAnchors(f"{what} uses several anchors")


class TargetModuleData:
    """Highest monomial m of W with its Drinfeld polynomials.

    P_j(x) = prod over Y_{j,b} in m of (1 - b x), so Y_{j,b} has the
    highest l-weight q_j P(z q_j^{-1}) / P(z q_j).
    """

    def __init__(self, cd: CartanDatum, m: Monomial):
        if not is_dominant(m):
            raise ValueError("highest monomial must be dominant")
        _single_anchor(m, "target monomial")
        self.cd = cd
        self.m = m

    @property
    def omega(self) -> WeightVector:
        return WeightVector(self.m.node_exponents(self.cd.rank))

    def roots(self, j):
        """Points b (with multiplicity) such that P_j(x) = prod (1 - b x)."""
        return [(p, e) for (i, p), e in self.m.items() if i == j]

    def deg(self, j):
        return sum(e for _, e in self.roots(j))

    def drinfeld(self, j, var="x") -> QPoly:
        P = QPoly([QRat(1)], var)
        for p, e in self.roots(j):
            for _ in range(e):
                P = P * QPoly([QRat(1), -p.qrat()], var)
        return P


def _log_f(cd: CartanDatum, m: Monomial, i: int, K: int, var="z") -> QSeries:
    coeffs = [QRat(0)]
    for r in range(1, K + 1):
        acc = QRat(0)
        for (j, p), e in m.items():
            acc = acc + QRat(e) * q_pow(-r * p.shift) * ct_at_power(cd, i, j, r)
        coeffs.append(acc / r)
    return QSeries(coeffs, var)


def f_series(cd: CartanDatum, data, i: int, K: int, var="z") -> QSeries:
    """Eigenvalue of T_i(z) on the highest vector of W, as a series in z.

    ``data`` is a TargetModuleData or a bare monomial; non-dominant monomials
    are accepted and give the corresponding l-weight product.
    """
    m = data.m if isinstance(data, TargetModuleData) else data
    _single_anchor(m, "monomial")
    return series_exp(_log_f(cd, m, i, K, var))


def a_constants(cd: CartanDatum, omega) -> tuple:
    """a_i = eigenvalue of tilde k_i^{-1} on a vector of weight omega."""
    out = []
    for i in range(cd.rank):
        e = sum(Fraction(cd.d[j]) * cd.Cinv[j][i] * Fraction(omega[j]) for j in range(cd.rank))
        out.append(q_pow(-e))
    return tuple(out)


def a_exponents(cd: CartanDatum, omega) -> tuple:
    return tuple(-sum(Fraction(cd.d[j]) * cd.Cinv[j][i] * Fraction(omega[j]) for j in range(cd.rank))
                 for i in range(cd.rank))


# --------------------------------------------------------------------------


@dataclass
class Summand:
    monomial: Monomial
    mult: int
    scalar: QRat
    u_exp: tuple
    f_factors: dict
    q_factors: dict
    series: QSeries | None = None

    def latex(self) -> str:
        parts = []
        if self.mult != 1:
            parts.append(str(self.mult))
        if self.scalar != 1:
            parts.append(f"({self.scalar.latex()})")
        for i, e in enumerate(self.u_exp, 1):
            if e:
                parts.append(f"u_{i}" + ("" if e == 1 else f"^{{{e}}}"))
        for name, fac in (("f", self.f_factors), ("Q", self.q_factors)):
            num = [k for k, p in sorted(fac.items()) for _ in range(p) if p > 0]
            den = [k for k, p in sorted(fac.items()) for _ in range(-p) if p < 0]

            def fmt(ks):
                return "".join(f"{name}_{i}({_zq(s)})" for i, s in ks) or "1"

            if num or den:
                parts.append(f"\\frac{{{fmt(num)}}}{{{fmt(den)}}}")
        return " ".join(parts) or "1"

    def to_json(self):
        def enc(fac):
            return [[i, _frac_str(s), p] for (i, s), p in sorted(fac.items())]

        out = {
            "monomial": self.monomial.to_json(),
            "mult": self.mult,
            "scalar": self.scalar.to_json(),
            "u_exp": list(self.u_exp),
            "f_factors": enc(self.f_factors),
            "q_factors": enc(self.q_factors),
        }
        if self.series is not None:
            out["series"] = [c.to_json() for c in self.series.coeffs]
        return out


def _frac_str(s):
    s = Fraction(s)
    return f"{s.numerator}/{s.denominator}"


def _zq(s):
    s = Fraction(s)
    if s == 0:
        return "z"
    if s == 1:
        return "zq"
    return "zq^{" + (str(s) if s.denominator == 1 else f"{s.numerator}/{s.denominator}") + "}"


@dataclass
class EigenvalueTemplate:
    cartan: str
    ht: tuple
    a: tuple
    summands: list = field(default_factory=list)

    def latex(self) -> str:
        return " + ".join(s.latex() for s in self.summands)

    def to_json(self):
        return {
            "type": self.cartan,
            "ht": list(self.ht),
            "a": [x.to_json() for x in self.a],
            "summands": [s.to_json() for s in self.summands],
        }

    def evaluate(self, Q: dict, q0, u0, K: int, var="z"):
        """Numeric z-series of the eigenvalue.

        Q maps node -> list of complex polynomial coefficients of Q_i(z);
        u0 is a sequence of numeric u_i.
        """
        total = [0j] * (K + 1)
        for s in self.summands:
            c = complex(s.scalar.eval(q0)) * s.mult
            for i, e in enumerate(s.u_exp):
                c *= complex(u0[i]) ** e
            ser = [complex(x.eval(q0)) for x in s.series.coeffs[: K + 1]]
            for (i, sh), p in s.q_factors.items():
                scale = cmath.exp(cmath.log(complex(q0)) * sh)
                qs = _num_series([complex(a) * scale**k for k, a in enumerate(Q[i])], K)
                if p < 0:
                    qs = _num_inverse(qs)
                for _ in range(abs(p)):
                    ser = _num_mul(ser, qs)
            for k in range(K + 1):
                total[k] += c * ser[k]
        return total


def _num_series(coeffs, K):
    out = list(coeffs[: K + 1])
    return out + [0j] * (K + 1 - len(out))


def _num_mul(a, b):
    K = min(len(a), len(b)) - 1
    return [sum(a[k] * b[n - k] for k in range(n + 1)) for n in range(K + 1)]


def _num_inverse(a):
    if a[0] == 0:
        raise PoleAtEvaluationPoint("series with zero constant term")
    b = [1 / a[0]]
    for n in range(1, len(a)):
        b.append(-sum(a[k] * b[n - k] for k in range(1, n + 1)) / a[0])
    return b


def _fseries_cache(cd, data, K):
    return {i: f_series(cd, data, i, K) for i in cd.nodes}


def _ratio_series(cd, fser, factors, K):
    out = QSeries.constant(QRat(1), K)
    for (i, sh), p in factors.items():
        s = fser[i].scale_var(q_pow(sh))
        if p < 0:
            s = s.inverse()
        for _ in range(abs(p)):
            out = out * s
    return out


def _factor_pattern(cd, M: Monomial):
    f_fac, q_fac = {}, {}
    for (i, p), e in M.items():
        di = cd.di(i)
        for key, sgn in (((i, p.shift - di), 1), ((i, p.shift + di), -1)):
            f_fac[key] = f_fac.get(key, 0) + sgn * e
    f_fac = {k: v for k, v in f_fac.items() if v}
    q_fac = dict(f_fac)
    return f_fac, q_fac


def eigenvalue_template(cd: CartanDatum, chi: QCharacter, data: TargetModuleData, lam, K: int = 12):
    """Replace each Y_{i,b} of chi by q_i^{ht_i} a_i u_i f_i(bzq_i^{-1})Q_i(bzq_i^{-1}) / (f_i(bzq_i)Q_i(bzq_i))."""
    ht = ht_decompose(cd, data.omega, lam)
    a = a_constants(cd, data.omega)
    fser = _fseries_cache(cd, data, K)
    summands = []
    for M, c in chi.items():
        _single_anchor(M, "q-character monomial")
        e = M.node_exponents(cd.rank)
        scalar = QRat(1)
        for i in range(cd.rank):
            scalar = scalar * (a[i] * q_pow(cd.d[i] * ht[i])) ** e[i]
        f_fac, q_fac = _factor_pattern(cd, M)
        summands.append(Summand(M, c, scalar, tuple(e), f_fac, q_fac, _ratio_series(cd, fser, f_fac, K)))
    return EigenvalueTemplate(cd.label, ht, a, summands)


# --------------------------------------------------------------------------


@dataclass
class FRatio:
    """Closed form of F_M / F_m: scalar * prod v_i^{v_exp_i} * ratfunc(z)."""

    scalar: QRat
    v_exp: tuple
    ratfunc: RatFunc

    def series(self, K):
        return self.ratfunc.series(K) * self.scalar

    def eval(self, z, q0, v0):
        val = complex(self.scalar.eval(q0))
        for i, e in enumerate(self.v_exp):
            val *= complex(v0[i]) ** e
        num = sum(complex(c.eval(q0)) * z**k for k, c in enumerate(self.ratfunc.num.coeffs))
        den = sum(complex(c.eval(q0)) * z**k for k, c in enumerate(self.ratfunc.den.coeffs))
        if den == 0:
            raise PoleAtEvaluationPoint("F-ratio has a pole here")
        return val * num / den


def f_ratio_rational(cd: CartanDatum, witnesses, data: TargetModuleData) -> FRatio:
    """prod_k v_{i_k}^{-1} q_{i_k}^{-deg P_{i_k}} P_{i_k}(q_{i_k}/(z a_k)) / P_{i_k}(1/(q_{i_k} z a_k))."""
    scalar = QRat(1)
    v_exp = [0] * cd.rank
    num = QPoly([QRat(1)], "z")
    den = QPoly([QRat(1)], "z")
    for i, a in witnesses:
        di = cd.di(i)
        v_exp[i - 1] -= 1
        scalar = scalar * q_pow(-di * data.deg(i))
        # P(c/z) = prod (1 - b c / z) = z^{-deg} prod (z - b c)
        for p, e in data.roots(i):
            for _ in range(e):
                num = num * QPoly([-(p.qrat() * q_pow(di - a.shift)), QRat(1)], "z")
                den = den * QPoly([-(p.qrat() * q_pow(-di - a.shift)), QRat(1)], "z")
    return FRatio(scalar, tuple(v_exp), RatFunc(num, den))


def f_ratio_series(cd: CartanDatum, m_V: Monomial, M_V: Monomial, data: TargetModuleData, K: int):
    """F_M / F_m from the exp-series side: (q-part scalar * series, u exponent vector)."""
    fser = _fseries_cache(cd, data, K)
    a = a_constants(cd, data.omega)
    ratio = M_V / m_V
    e = ratio.node_exponents(cd.rank)
    scalar = QRat(1)
    for i in range(cd.rank):
        scalar = scalar * a[i] ** e[i]
    sM = _ratio_series(cd, fser, _factor_pattern(cd, M_V)[0], K)
    sm = _ratio_series(cd, fser, _factor_pattern(cd, m_V)[0], K)
    return sM * sm.inverse() * scalar, tuple(e)


def telescoping_check(cd: CartanDatum, m_V: Monomial, witnesses, data: TargetModuleData, K: int = 12):
    """Compare the closed F-ratio with the exp-series quotient coefficient by coefficient.

    Returns (ok, first mismatching index or None).
    """
    M_V = witness_product(cd, m_V, witnesses)
    ser, u_exp = f_ratio_series(cd, m_V, M_V, data, K)
    closed = f_ratio_rational(cd, witnesses, data)
    # u^{u_exp} must equal prod v^{v_exp} with v_i = prod_j u_j^{C_{j,i}}
    u_from_v = [sum(cd.C[j][i] * closed.v_exp[i] for i in range(cd.rank)) for j in range(cd.rank)]
    if tuple(u_from_v) != u_exp:
        return False, -1
    cs = closed.series(K)
    for k in range(K + 1):
        if cs[k] != ser[k]:
            return False, k
    return True, None


def firstpol_eigenvalue(cd: CartanDatum, data, witnesses, i: int, K: int = 12) -> QSeries:
    """Eigenvalue of T_i(z) on the l-weight space of m * prod A^{-1}_{i_k,a_k}.

    Computed as f_i(z) * prod_{i_k = i} (1 - z/a_k) and cross-checked against
    the exponential formula applied to the lowered monomial itself.
    """
    m = data.m if isinstance(data, TargetModuleData) else data
    out = f_series(cd, m, i, K)
    for j, a in witnesses:
        if j == i:
            out = out * QSeries.from_poly([QRat(1), -q_pow(-a.shift)], K)
    direct = f_series(cd, witness_product(cd, m, witnesses), i, K)
    if direct != out:
        raise ArithmeticError("lowered l-weight disagrees with the product formula")
    return out


def template_witnesses(cd: CartanDatum, chi: QCharacter, top: Monomial | None = None):
    """Witness lists for the monomials of chi, from the expansion of its top monomial."""
    from .grring import highest_monomial

    top = top or highest_monomial(cd, chi)
    full, wit = fm_expand(cd, top)
    missing = [m for m in chi.terms if m not in wit]
    if missing:
        raise NoWitness(f"no witness for {missing[0].latex()}")
    return top, {m: wit[m] for m in chi.terms}


def residue_cancellation_check(cd: CartanDatum, template: EigenvalueTemplate, chi_top: Monomial,
                               witnesses: dict, data: TargetModuleData, Q: dict, z_star,
                               q0, u0) -> float:
    """|sum of residues at z_star| of the template divided by F_{m_V}.

    Each summand becomes q^{ht.e} (F_M/F_{m_V}) * Q-ratio, which is rational
    in z, so the residue at a simple pole z_star = w/c of Q_i(cz)^{-1} is
    (rest)(z_star) / (c Q_i'(w)).
    """
    q0 = complex(q0)
    u0 = [complex(x) for x in u0]
    v0 = [1 + 0j] * cd.rank
    for i in range(cd.rank):
        for j in range(cd.rank):
            v0[i] *= u0[j] ** cd.C[j][i]
    lq = cmath.log(q0)

    def qpoly_eval(i, x):
        return sum(complex(c) * x**k for k, c in enumerate(Q[i]))

    def qpoly_deriv(i, x):
        return sum(k * complex(c) * x ** (k - 1) for k, c in enumerate(Q[i]) if k)

    total = 0j
    for s in template.summands:
        fr = f_ratio_rational(cd, witnesses[s.monomial], data)
        ht_scal = 1 + 0j
        for i in range(cd.rank):
            ht_scal *= cmath.exp(lq * cd.d[i] * template.ht[i] * s.u_exp[i])
        poles = [(i, sh) for (i, sh), p in s.q_factors.items()
                 if p < 0 and abs(qpoly_eval(i, cmath.exp(lq * sh) * z_star)) < 1e-10]
        if not poles:
            continue
        if len(poles) > 1 or s.q_factors[poles[0]] != -1:
            raise PoleAtEvaluationPoint("pole of order above one")
        pi, psh = poles[0]
        c = cmath.exp(lq * psh)
        rest = s.mult * ht_scal * fr.eval(z_star, q0, v0)
        for (i, sh), p in s.q_factors.items():
            if (i, sh) == (pi, psh):
                continue
            val = qpoly_eval(i, cmath.exp(lq * sh) * z_star)
            if val == 0:
                raise PoleAtEvaluationPoint("extra zero of a Q factor at the pole")
            rest *= val**p
        total += rest / (c * qpoly_deriv(pi, c * z_star))
    return abs(total)
