"""Exact sl2 matrix laboratory.

Models for KR modules and truncated prefundamental representations, the
Cartan-type modes h_{-m}, the normalized operator T_1(z), the closed-form
twisted transfer matrix of R^+_{1,1} on a KR module, and an independent
factorized twisted trace used to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import (
    QPoly,
    QRat,
    QSeries,
    RatFunc,
    q_pow,
    qbinom,
    qfactorial,
    qint,
    rational_reconstruct,
    series_exp,
    series_log,
)


class NonThinWithoutData(ValueError):
    pass


class PolynomialityViolation(ArithmeticError):
    def __init__(self, msg, entry=None, power=None, coefficient=None):
        super().__init__(msg)
        self.entry, self.power, self.coefficient = entry, power, coefficient


class TruncationTooSmall(ValueError):
    pass


ZERO = QRat(0)
ONE = QRat(1)
QQ = q_pow(1) - q_pow(-1)


# --------------------------------------------------------------------------
# small dense matrices over any ring


class Mat:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]

    @classmethod
    def zeros(cls, n, m=None, zero=ZERO):
        return cls([[zero] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n, one=ONE):
        zero = one - one
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries):
        entries = list(entries)
        zero = entries[0] - entries[0]
        return cls([[entries[i] if i == j else zero for j in range(len(entries))] for i in range(len(entries))])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def one_like(self):
        n = self.shape[0]
        return Mat.identity(n, _one(self.rows[0][0]))

    def __add__(self, other):
        if not isinstance(other, Mat):
            return self + Mat.identity(self.shape[0], _one(self.rows[0][0])) * other
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Mat):
            n, k = self.shape
            m = other.shape[1]
            out = []
            for i in range(n):
                row = []
                for j in range(m):
                    acc = None
                    for t in range(k):
                        a, b = self.rows[i][t], other.rows[t][j]
                        if _zero(a) or _zero(b):
                            continue
                        p = a * b
                        acc = p if acc is None else acc + p
                    row.append(acc if acc is not None else self.rows[i][0] - self.rows[i][0])
                out.append(row)
            return Mat(out)
        return Mat([[a * other for a in r] for r in self.rows])

    def __rmul__(self, other):
        return Mat([[other * a for a in r] for r in self.rows])

    def __truediv__(self, c):
        return Mat([[a / c for a in r] for r in self.rows])

    def __pow__(self, n):
        out = Mat.identity(self.shape[0], _one(self.rows[0][0]))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows

    def is_zero(self):
        return all(_zero(a) for r in self.rows for a in r)

    def is_diagonal(self):
        return all(_zero(a) for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def map(self, f):
        return Mat([[f(a) for a in r] for r in self.rows])

    def __repr__(self):
        return "Mat(" + "; ".join(", ".join(str(a) for a in r) for r in self.rows) + ")"


def _zero(a):
    if isinstance(a, QRat):
        return a.is_zero()
    if isinstance(a, Bi):
        return not a.terms
    if isinstance(a, QSeries):
        return all(_zero(c) for c in a.coeffs)
    if hasattr(a, "is_zero"):
        return a.is_zero()
    return a == 0


def _one(a):
    return a.one_like() if hasattr(a, "one_like") else 1


# --------------------------------------------------------------------------
# bivariate polynomials in z and v, truncated in v


class Bi:
    """Finite sum of QRat * z^i v^j with v-degree kept at most Kv."""

    __slots__ = ("terms", "Kv")

    def __init__(self, terms=None, Kv=0):
        self.Kv = Kv
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero() and k[1] <= Kv}

    @classmethod
    def const(cls, c, Kv):
        return cls({(0, 0): QRat(c)}, Kv)

    def one_like(self):
        return Bi.const(1, self.Kv)

    def __add__(self, other):
        if not isinstance(other, Bi):
            other = Bi.const(other, self.Kv)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, ZERO) + c
        return Bi(d, min(self.Kv, other.Kv))

    def __neg__(self):
        return Bi({k: -c for k, c in self.terms.items()}, self.Kv)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Bi):
            return Bi({k: c * other for k, c in self.terms.items()}, self.Kv)
        Kv = min(self.Kv, other.Kv)
        d = {}
        for (a, b), c in self.terms.items():
            for (e, f), g in other.terms.items():
                if b + f <= Kv:
                    k = (a + e, b + f)
                    d[k] = d.get(k, ZERO) + c * g
        return Bi(d, Kv)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Bi) and self.terms == other.terms

    def z_degree(self):
        return max((k[0] for k in self.terms), default=-1)

    def v_series(self, zpow, Kv=None) -> QSeries:
        Kv = self.Kv if Kv is None else Kv
        return QSeries([self.terms.get((zpow, j), ZERO) for j in range(Kv + 1)], "v")

    def at_v_zero(self) -> QPoly:
        deg = self.z_degree()
        return QPoly([self.terms.get((i, 0), ZERO) for i in range(deg + 1)], "z")

    def __repr__(self):
        return f"Bi({ {k: str(c) for k, c in sorted(self.terms.items())} })"


# --------------------------------------------------------------------------
# representation models


@dataclass
class RepModel:
    """Finite (or truncated) sl2 model in a basis v_0, ..., v_{n-1}.

    ``xp`` and ``xm`` map a mode r to the matrix of x^+_{1,r} / x^-_{1,r}
    (None when the mode is outside the supported window).  ``phi_plus`` and
    ``phi_minus`` give, per basis vector, a rational eigenvalue as
    (scalar, {b: e}) meaning scalar * prod (1 - b z)^e.
    """

    kind: str
    labels: tuple
    weights: tuple
    xp: object
    xm: object
    phi_plus: list | None = None
    phi_minus: list | None = None
    truncation: int | None = None
    supplied_h: object = None
    highest_h: object = None
    ht: tuple | None = None
    overflow: set = field(default_factory=set)

    @property
    def dim(self):
        return len(self.labels)

    def k(self):
        return Mat.diag([q_pow(w) for w in self.weights])

    def kinv(self):
        return Mat.diag([q_pow(-w) for w in self.weights])

    def touches_tail(self, index):
        return self.truncation is not None and index >= self.truncation


def _mat(n, entries):
    m = Mat.zeros(n)
    for (i, j), c in entries.items():
        m.rows[i][j] = c
    return m


def kr_model(k: int, a: QRat | None = None) -> RepModel:
    """W_{k, a q^{1-2k}} with basis w_0..w_k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = ONE if a is None else QRat(a)
    n = k + 1

    def xp(r):
        return _mat(n, {(j - 1, j): a ** r * q_pow(2 * r * (1 - j)) for j in range(1, n)})

    def xm(r):
        return _mat(n, {(j + 1, j): a ** r * q_pow(-2 * r * j) * qint(j + 1) * qint(k - j) for j in range(k)})

    phi = []
    for j in range(n):
        facs: dict = {}
        for b, e in ((q_pow(-2 * k) * a, 1), (q_pow(2) * a, 1), (q_pow(2 - 2 * j) * a, -1), (q_pow(-2 * j) * a, -1)):
            facs[b] = facs.get(b, 0) + e
        phi.append((q_pow(k - 2 * j), {b: e for b, e in facs.items() if e}))
    return RepModel(f"KR({k})", tuple(f"w{j}" for j in range(n)), tuple(k - 2 * j for j in range(n)),
                    xp, xm, phi, phi, ht=tuple(range(n)))


def prefund_model(kind: str, a=None, M: int = 8, consistent: bool = False) -> RepModel:
    """Truncated L+, R+ or Lbar+ with basis v_0..v_M from explicit action formulas.

    Taken verbatim, the R+ and Lbar+ formulas violate [x^+_r, x^-_s] by a sign
    in the mode that lowers (resp. raises) by one loop degree.
    ``consistent=True`` flips that sign, which restores the relations.
    """
    if M < 1:
        raise ValueError("truncation M must be at least 1")
    a = ONE if a is None else QRat(a)
    n = M + 1
    overflow: set = set()
    if kind == "L+":
        def xp(r):
            return _mat(n, {(j - 1, j): ONE for j in range(1, n)}) if r == 0 else (Mat.zeros(n) if r > 0 else None)

        def xm(r):
            if r < 1:
                return None
            if r > 1:
                return Mat.zeros(n)
            overflow.add(("x-", M))
            return _mat(n, {(j + 1, j): -a * q_pow(-j) * qint(j + 1) / QQ for j in range(M)})

        phi = [(q_pow(-2 * j), {a: 1}) for j in range(n)]
        return RepModel("L+", tuple(f"v{j}" for j in range(n)), tuple(-2 * j for j in range(n)),
                        xp, xm, phi, None, truncation=M, overflow=overflow)
    if kind == "R+":
        def xp(r):
            if r < 0:
                return None
            if r > 0:
                return Mat.zeros(n)
            overflow.add(("x+", M))
            return _mat(n, {(j + 1, j): q_pow(2 * j) for j in range(M)})

        def xm(r):
            if r < 1:
                return None
            if r > 1:
                return Mat.zeros(n)
            sgn = ONE if consistent else -ONE
            return _mat(n, {(j - 1, j): sgn * a * q_pow(1 - j) * qint(j) / QQ for j in range(1, n)})

        phi = [(q_pow(2 * j), {a: 1}) for j in range(n)]
        return RepModel("R+", tuple(f"v{j}*" for j in range(n)), tuple(2 * j for j in range(n)),
                        xp, xm, phi, None, truncation=M, overflow=overflow)
    if kind == "Lbar+":
        def xm(r):
            if r > 0:
                return None
            if r < 0:
                return Mat.zeros(n)
            overflow.add(("x-", M))
            return _mat(n, {(j + 1, j): -q_pow(2 * j) for j in range(M)})

        def xp(r):
            if r > -1:
                return None
            if r < -1:
                return Mat.zeros(n)
            sgn = -ONE if consistent else ONE
            return _mat(n, {(j - 1, j): sgn * a.inv() * q_pow(1 - j) * qint(j) / QQ for j in range(1, n)})

        # phi^-(z) = q^{2j}(1 - (za)^{-1}); stored as a function of y = 1/z
        phi = [(q_pow(2 * j), {a.inv(): 1}) for j in range(n)]
        return RepModel("Lbar+", tuple(f"v{j}*" for j in range(n)), tuple(-2 * j for j in range(n)),
                        xp, xm, None, phi, truncation=M, overflow=overflow)
    raise ValueError(f"unknown prefundamental kind {kind!r}")


def tensor_square_zero_weight_model() -> RepModel:
    """Zero-weight space of L(Y_{1,1})^{(x)2} with supplied h_{1,-m} matrices.

    In the basis used there, h_{1,-m} is upper triangular with diagonal
    [m](1 - q^{-2m})/m and corner a_m = -[2m] q^{-m} (q^{-3} - q^2)/(q + q^{-1}).
    """
    def h(m):
        d = qint(m) * (ONE - q_pow(-2 * m)) / m
        am = -qint(2 * m) * q_pow(-m) * (q_pow(-3) - q_pow(2)) / (q_pow(1) + q_pow(-1))
        return Mat([[d, am], [ZERO, d]])

    def highest(m):
        return qint(m) * 2 / m

    return RepModel("supplied", ("w-v+", "basis2"), (0, 0), None, None,
                    supplied_h=h, highest_h=highest, ht=(1, 1))


# --------------------------------------------------------------------------
# rational eigenvalues and Cartan modes


def _rational_series(scalar, facs, K, var="z"):
    out = QSeries.constant(scalar, K, var)
    for b, e in facs.items():
        lin = QSeries.from_poly([ONE, -b], K, var)
        out = out * (lin ** e)
    return out


def _at_infinity(scalar, facs):
    """Rewrite scalar * prod (1 - b z)^e as a function of y = 1/z."""
    if sum(facs.values()) != 0:
        raise ValueError("eigenvalue is not regular at infinity")
    s = scalar
    for b, e in facs.items():
        s = s * (-b) ** e
    return s, {b.inv(): e for b, e in facs.items()}


def phi_series(model: RepModel, sign: int, K: int):
    """Per basis vector, phi^+(z) as a z-series or phi^-(z) as a series in 1/z."""
    if sign > 0:
        if model.phi_plus is None:
            raise NonThinWithoutData("model has no phi^+ data")
        return [_rational_series(s, f, K) for s, f in model.phi_plus]
    if model.phi_minus is None:
        raise NonThinWithoutData("model has no phi^- data")
    if model.kind == "Lbar+":
        return [_rational_series(s, f, K, "y") for s, f in model.phi_minus]
    return [_rational_series(*_at_infinity(s, f), K, "y") for s, f in model.phi_minus]


def h_positive_modes(model: RepModel, K: int):
    """Diagonal eigenvalues of h_{1,m}, m = 1..K, from phi^+ = k exp((q-q^{-1}) sum h_m z^m)."""
    out = {m: [] for m in range(1, K + 1)}
    for ser in phi_series(model, +1, K):
        lg = series_log(ser / ser[0])
        for m in range(1, K + 1):
            out[m].append(lg[m] / QQ)
    return out


def h_negative_modes(model: RepModel, K: int):
    """Matrices of h_{1,-m}, m = 1..K.

    Thin models read them off the 1/z expansion of phi^-; other models must
    carry supplied matrices.
    """
    if model.supplied_h is not None:
        return {m: model.supplied_h(m) for m in range(1, K + 1)}
    if model.phi_minus is None:
        raise NonThinWithoutData(f"{model.kind} has neither phi^- data nor supplied h modes")
    out = {m: [] for m in range(1, K + 1)}
    for ser in phi_series(model, -1, K):
        lg = series_log(ser / ser[0])
        for m in range(1, K + 1):
            out[m].append(-lg[m] / QQ)
    mats = {m: Mat.diag(v) for m, v in out.items()}
    if not _h_roundtrip(model, out, K):
        raise ArithmeticError("h modes do not reproduce phi^-")
    return mats


def _h_roundtrip(model, eig, K):
    sers = phi_series(model, -1, K)
    for j, ser in enumerate(sers):
        lg = QSeries([ZERO] + [-QQ * eig[m][j] for m in range(1, K + 1)], "y")
        if series_exp(lg) * ser[0] != ser:
            return False
    return True


def _t_weight(m):
    return qint(m) * (q_pow(m) + q_pow(-m))


def ti_polynomial_check(model: RepModel, K: int = 10, degree=None):
    """g(z)^{-1} T_1(z) as a matrix of polynomials in z.

    g is the eigenvalue on the highest vector.  Every coefficient of z^p
    above the allowed degree (from ``degree`` or the model's ht labels)
    must vanish exactly up to order K.
    """
    h = h_negative_modes(model, K)
    n = model.dim
    if model.highest_h is not None:
        hi = {m: model.highest_h(m) for m in range(1, K + 1)}
    else:
        hi = {m: h[m][0, 0] for m in range(1, K + 1)}
    zero_mat = Mat.zeros(n)
    coeffs = [zero_mat]
    for m in range(1, K + 1):
        coeffs.append((h[m] - Mat.identity(n) * hi[m]) / _t_weight(m))
    E = series_exp(QSeries(coeffs, "z"))
    ht = model.ht or tuple(range(n))
    report = {}
    polys = Mat.zeros(n)
    for i in range(n):
        for j in range(n):
            allowed = degree if degree is not None else max(ht[i], ht[j])
            cs = [E[p][i, j] for p in range(K + 1)]
            for p in range(allowed + 1, K + 1):
                if not cs[p].is_zero():
                    raise PolynomialityViolation(
                        f"entry ({i},{j}) has nonzero z^{p} coefficient {cs[p]}", (i, j), p, cs[p])
            poly = QPoly(cs[: allowed + 1], "z")
            polys.rows[i][j] = poly
            report[(i, j)] = poly.deg
    return polys, report


# --------------------------------------------------------------------------
# closed-form transfer matrix of R^+_{1,1} on W_{N, q^{1-2N}}


def f1_closed(N: int, K: int) -> QSeries:
    """exp(sum_m z^m q^{Nm}[Nm] / (m [m] (q^m + q^{-m})))."""
    lg = [ZERO] + [q_pow(N * m) * qint(N * m) / (_t_weight(m) * m) for m in range(1, K + 1)]
    return series_exp(QSeries(lg, "z"))


@dataclass
class TransferResult:
    N: int
    Kv: int
    matrix: Mat
    f1: QSeries
    Q: list
    reconstructions: dict = field(default_factory=dict)

    def degree(self, j):
        return self.Q[j].z_degree()

    def q_series(self, j, zpow) -> QSeries:
        return self.Q[j].v_series(zpow)

    def reconstruct(self, max_deg=None):
        """Each z-coefficient of each Q_j as an exact rational function of v."""
        max_deg = 2 * self.N if max_deg is None else max_deg
        if self.Kv + 1 < 2 * max_deg + 2:
            raise TruncationTooSmall(f"Kv={self.Kv} too small for degree bound {max_deg}")
        out = {}
        for j, bi in enumerate(self.Q):
            row = []
            for p in range(bi.z_degree() + 1):
                r = rational_reconstruct(bi.v_series(p), max_deg)
                if r is None:
                    raise ArithmeticError(f"no reconstruction for z^{p} of Q on w_{j}")
                row.append(r)
            out[j] = row
        self.reconstructions = out
        return out

    def q_numeric(self, j, q0, v0):
        """Complex z-coefficients of Q_j at (q0, v0); exact rational forms when available."""
        rows = self.reconstructions.get(j)
        if rows is not None:
            return [_ratfunc_numeric(r, q0, v0) for r in rows]
        bi = self.Q[j]
        return [sum(complex(bi.terms.get((p, k), ZERO).eval(q0)) * v0**k for k in range(self.Kv + 1))
                for p in range(bi.z_degree() + 1)]


def _ratfunc_numeric(r: RatFunc, q0, v0):
    def ev(P):
        return sum(complex(c.eval(q0)) * v0**k for k, c in enumerate(P.coeffs))

    return ev(r.num) / ev(r.den)


def transfer_sl2(N: int, Kv: int, K: int | None = None) -> TransferResult:
    """Twisted transfer matrix of R^+_{1,1} on W_{N,q^{1-2N}}, divided by f_1(z).

    Sum over r <= N of ((q-q^{-1})z)^r/[r]! (x^-_0)^r T_1(z) (x^+_{-1}k)^r
    times sum_{m>=r} v^m [m;r] q^{r(3-r)/2 - rm} k^{-m}, with T_1 built from
    the model's h modes and the inner sums kept as v-series to order Kv.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if Kv <= N:
        raise TruncationTooSmall(f"Kv={Kv} must exceed N={N}")
    K = N + 2 if K is None else K
    W = kr_model(N)
    n = N + 1
    P, _ = ti_polynomial_check(W, K)
    f1 = f1_closed(N, K)
    if _highest_T_series(W, K) != f1:
        raise ArithmeticError("closed f_1 disagrees with the highest T_1 eigenvalue")

    def bi_poly(p: QPoly):
        return Bi({(i, 0): c for i, c in enumerate(p.coeffs)}, Kv)

    Tm = P.map(lambda p: bi_poly(p) if isinstance(p, QPoly) else Bi({}, Kv))
    Xm = W.xm(0).map(lambda c: Bi.const(c, Kv))
    Yp = (W.xp(-1) * W.k()).map(lambda c: Bi.const(c, Kv))
    total = Mat.zeros(n, zero=Bi({}, Kv))
    for r in range(N + 1):
        S = []
        for j in range(n):
            lam = N - 2 * j
            S.append(Bi({(0, m): qbinom(m, r) * q_pow(Fraction(r * (3 - r), 2) - r * m - m * lam)
                         for m in range(r, Kv + 1)}, Kv))
        pref = Bi({(r, 0): QQ ** r / qfactorial(r)}, Kv)
        term = (Xm ** r) * Tm * (Yp ** r) * Mat.diag(S)
        total = total + term * pref
    if not total.is_diagonal():
        raise ArithmeticError("transfer matrix is not diagonal on a thin KR module")
    Q = [total[j, j] for j in range(n)]
    return TransferResult(N, Kv, total, f1, Q)


def _highest_T_series(model, K):
    h = h_negative_modes(model, K)
    lg = QSeries([ZERO] + [h[m][0, 0] / _t_weight(m) for m in range(1, K + 1)], "z")
    return series_exp(lg)


def q_polynomial_roots(result: TransferResult, j: int, q0, v0):
    import numpy as np

    c = result.q_numeric(j, q0, v0)
    return list(np.roots(c[::-1])) if len(c) > 1 else []


# --------------------------------------------------------------------------
# independent factorized twisted trace


@dataclass
class TraceResult:
    """Eigenvalues of a twisted transfer matrix on a thin W, grouped by the V weight."""

    by_weight: dict
    K: int

    def numeric(self, j, q0, u0):
        out = [0j] * (self.K + 1)
        for lam, sers in self.by_weight.items():
            c = complex(u0) ** lam
            for p in range(self.K + 1):
                out[p] += c * complex(sers[j][p].eval(q0))
        return out

    def v_coefficient(self, lam, j):
        return self.by_weight[lam][j]


def _exp_q_product(V, W, pairs, coef, K):
    """Multiply out prod_m exp_q(coef z^m A_m (x) B_m) in the given order.

    Returns terms (z power, scalar, V matrix, W matrix); terms whose z power
    exceeds K or whose V or W factor vanishes are dropped.
    """
    nV, nW = V.dim, W.dim
    terms = [(0, ONE, Mat.identity(nV), Mat.identity(nW))]
    rmax = min(nV, nW) - 1
    for m, A, B in pairs:
        if A is None or B is None or A.is_zero() or B.is_zero():
            continue
        out = []
        for zp, c, X, Y in terms:
            Ar, Br = Mat.identity(nV), Mat.identity(nW)
            for r in range(rmax + 1):
                if zp + r * m > K:
                    break
                if r:
                    Ar, Br = Ar * A, Br * B
                    if Ar.is_zero() or Br.is_zero():
                        break
                cr = coef ** r / (q_pow(Fraction(r * (r - 1), 2)) * qfactorial(r))
                out.append((zp + r * m, c * cr, X * Ar, Y * Br))
        terms = out
    return terms


def factorized_trace(V: RepModel, W: RepModel, K: int, minus_sign: int = -1) -> TraceResult:
    """Tr_{V,u}(R^+ R^0 R^- R^infty) on W, computed from the models alone.

    R^+ = prod_{m>=0} exp_q((q^{-1}-q) z^m x^+_m (x) x^-_{-m}),
    R^- = prod_{m>0} exp_q((q^{-1}-q) z^m k^{-1}x^-_m (x) x^+_{-m}k),
    R^0 = exp(-(q-q^{-1}) sum_m z^m m/([m](q^m+q^{-m})) h_m (x) h_{-m}),
    R^infty = q^{-lambda_V lambda_W / 2}, and the twist weights V by u^{lambda_V}.
    The products are taken in increasing m, which is exact whenever
    products of distinct modes vanish on V (two-dimensional V, or a single
    active mode as for R^+).  W must be thin.  For a truncated V, levels
    within dim(W) - 1 of the cut are dropped entirely.

    ``minus_sign`` multiplies the R^- coefficient by -1 (default) or +1
    relative to (q - q^{-1}); only -1 agrees with the TQ template.
    """
    eta = h_positive_modes(V, K)
    hW = h_negative_modes(W, K)
    nV, nW = V.dim, W.dim
    Wk = W.k()

    def op(f, r):
        try:
            return f(r)
        except (TypeError, ValueError):
            return None

    plus = [(m, op(V.xp, m), op(W.xm, -m)) for m in range(K + 1)]
    minus = []
    for m in range(1, K + 1):
        A, B = op(V.xm, m), op(W.xp, -m)
        minus.append((m, None if A is None else V.kinv() * A, None if B is None else B * Wk))
    Rp = _exp_q_product(V, W, plus, q_pow(-1) - q_pow(1), K)
    Rm = _exp_q_product(V, W, minus, QQ * minus_sign, K)

    R0 = [[None] * nW for _ in range(nV)]
    for k in range(nV):
        for j in range(nW):
            lg = [ZERO] + [-QQ * eta[m][k] * hW[m][j, j] * m / _t_weight(m) for m in range(1, K + 1)]
            R0[k][j] = series_exp(QSeries(lg, "z"))

    zero = QSeries.constant(ZERO, K)
    by_weight: dict = {}
    for i in range(nV):
        if V.touches_tail(i + nW - 1):
            continue
        lamV = V.weights[i]
        sers = by_weight.setdefault(lamV, [zero] * nW)
        for zp, cp, A, B in Rp:
            for zm, cm, C, D in Rm:
                shift = zp + zm
                if shift > K:
                    continue
                for k in range(nV):
                    c = A[i, k] * C[k, i]
                    if c.is_zero():
                        continue
                    for j in range(nW):
                        acc = zero
                        for t in range(nW):
                            w = B[j, t] * D[t, j]
                            if not w.is_zero():
                                acc = acc + R0[k][t] * w
                        if all(x.is_zero() for x in acc.coeffs):
                            continue
                        scal = c * cp * cm * q_pow(-Fraction(lamV * W.weights[j], 2))
                        shifted = QSeries([ZERO] * shift + list(acc.coeffs[: K + 1 - shift]), "z")
                        sers[j] = sers[j] + shifted * scal
    return TraceResult(by_weight, K)


# --------------------------------------------------------------------------
# checks


def relation_checks(model: RepModel, window=range(-1, 3)):
    """Spot-check [x^+_r, x^-_s] = (phi^+_{r+s} - phi^-_{r+s})/(q - q^{-1}) and k x^{+-} k^{-1} = q^{+-2} x^{+-}.

    Returns a list of (name, ok).  Pairs touching the truncated tail are skipped.
    """
    n = model.dim
    K = 4
    out = []
    pp = phi_series(model, +1, K) if model.phi_plus is not None else None
    pm = phi_series(model, -1, K) if model.phi_minus is not None else None
    keep = [j for j in range(n) if not model.touches_tail(j + 1)]
    for r in window:
        X = model.xp(r)
        if X is not None:
            ok = model.k() * X * model.kinv() == X * q_pow(2)
            out.append((f"k x+_{r} k^-1 = q^2 x+_{r}", ok))
        Y = model.xm(r)
        if Y is not None:
            ok = model.k() * Y * model.kinv() == Y * q_pow(-2)
            out.append((f"k x-_{r} k^-1 = q^-2 x-_{r}", ok))
    for r in window:
        for s in window:
            X, Y = model.xp(r), model.xm(s)
            if X is None or Y is None:
                continue
            C = X * Y - Y * X
            m = r + s
            ok = True
            for j in keep:
                rhs = ZERO
                if m > 0 or m == 0:
                    if pp is not None and m <= K:
                        rhs = rhs + pp[j][m]
                    elif m == 0:
                        rhs = rhs + q_pow(model.weights[j])
                if m < 0 or m == 0:
                    if pm is not None and -m <= K:
                        rhs = rhs - pm[j][-m]
                    elif m == 0:
                        rhs = rhs - q_pow(-model.weights[j])
                if pp is None and m > 0 or pm is None and m < 0:
                    continue
                ok = ok and C[j, j] == rhs / QQ
                ok = ok and all(C[i, j].is_zero() for i in range(n) if i != j)
            out.append((f"[x+_{r}, x-_{s}]", ok))
    return out


def commutativity_check(A: Mat, B: Mat) -> bool:
    return (A * B - B * A).is_zero()
