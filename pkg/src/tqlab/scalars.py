"""Exact scalars: rational functions of q with rational exponents, truncated
power series over them, univariate polynomials / rational functions over
that field, and numeric evaluation at a complex q.

A QRat stores ``t**v * num(t) / den(t)`` with ``t = q**(1/L)`` where num and
den are dense integer polynomials with nonzero constant terms.  The
representation is canonical (see ``_normalize``), so equality is a tuple
comparison.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd

from . import kernels as kz


class DivisionByZero(ZeroDivisionError):
    pass


class NonzeroConstantTerm(ValueError):
    pass


class DenominatorVanishesAtPoint(ZeroDivisionError):
    pass


class InsufficientOrder(ValueError):
    pass


class InvalidEvaluationPoint(ValueError):
    pass


def _lcm(a, b):
    return a * b // igcd(a, b)


def _stretch(p, f):
    if f == 1 or len(p) <= 1:
        return p
    r = [0] * ((len(p) - 1) * f + 1)
    r[::f] = p
    return r


def _shift(p, k):
    return [0] * k + p if k else p


def _normalize(v, num, den, L, reduced=False):
    if not num:
        return _ZERO
    if not den:
        raise DivisionByZero("zero denominator")
    i = 0
    while not num[i]:
        i += 1
    if i:
        num = num[i:]
        v += i
    j = 0
    while not den[j]:
        j += 1
    if j:
        den = den[j:]
        v -= j
    if not reduced and len(num) > 1 and len(den) > 1:
        g = kz.gcd(num, den)
        if len(g) > 1:
            num = kz.divexact(num, g)
            den = kz.divexact(den, g)
    c = igcd(kz.content(num), kz.content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = [x // c for x in num]
        den = [x // c for x in den]
    if L > 1:
        g = igcd(L, v)
        if g > 1:
            for k in range(1, len(num)):
                if num[k]:
                    g = igcd(g, k)
                    if g == 1:
                        break
        if g > 1:
            for k in range(1, len(den)):
                if den[k]:
                    g = igcd(g, k)
                    if g == 1:
                        break
        if g > 1:
            num = num[::g]
            den = den[::g]
            v //= g
            L //= g
    return QRat._raw(v, num, den, L)


class QRat:
    """Element of Q(q^(1/L)), immutable and canonical."""

    __slots__ = ("_v", "_num", "_den", "_L", "_hash")

    def __init__(self, value=0):
        if isinstance(value, QRat):
            self._v, self._num, self._den, self._L = value._v, value._num, value._den, value._L
        else:
            fr = Fraction(value)
            if fr == 0:
                self._v, self._num, self._den, self._L = 0, [], [1], 1
            else:
                self._v, self._num, self._den, self._L = 0, [fr.numerator], [fr.denominator], 1
        self._hash = None

    @classmethod
    def _raw(cls, v, num, den, L):
        obj = object.__new__(cls)
        obj._v, obj._num, obj._den, obj._L = v, num, den, L
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def from_terms(cls, num_terms, den_terms=None):
        """Build from {exponent: coefficient} dicts (exponents may be Fractions)."""
        den_terms = den_terms if den_terms is not None else {0: 1}
        exps = [Fraction(e) for e in list(num_terms) + list(den_terms)]
        L = 1
        for e in exps:
            L = _lcm(L, e.denominator)

        def dense(terms):
            items = [(int(Fraction(e) * L), int(c)) for e, c in terms.items() if c]
            if not items:
                return 0, []
            lo = min(e for e, _ in items)
            hi = max(e for e, _ in items)
            p = [0] * (hi - lo + 1)
            for e, c in items:
                p[e - lo] += c
            return lo, kz.trim(p)

        vn, n = dense(num_terms)
        vd, d = dense(den_terms)
        if not d:
            raise DivisionByZero("zero denominator")
        return _normalize(vn - vd, n, d, L)

    @classmethod
    def one(cls):
        return _ONE

    def one_like(self):
        return _ONE

    # accessors ----------------------------------------------------------
    @property
    def L(self):
        return self._L

    def is_zero(self):
        return not self._num

    def num_terms(self):
        return {Fraction(self._v + k, self._L): c for k, c in enumerate(self._num) if c}

    def den_terms(self):
        return {Fraction(k, self._L): c for k, c in enumerate(self._den) if c}

    def is_laurent(self):
        return self._den == [1]

    def monomial_exponent(self):
        """Return (c, e) if self == c*q^e with rational c, else None."""
        if len(self._num) == 1 and len(self._den) == 1:
            return Fraction(self._num[0], self._den[0]), Fraction(self._v, self._L)
        return None

    def _key(self):
        return (self._v, tuple(self._num), tuple(self._den), self._L)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, QRat):
            if isinstance(other, (int, Fraction)):
                other = QRat(other)
            else:
                return NotImplemented
        return self._key() == other._key()

    def __bool__(self):
        return bool(self._num)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, QRat):
            return x
        if isinstance(x, (int, Fraction)):
            return QRat(x)
        return None

    def _lift(self, L):
        f = L // self._L
        return self._v * f, _stretch(self._num, f), _stretch(self._den, f)

    def __add__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        if not other._num:
            return self
        if not self._num:
            return other
        L = _lcm(self._L, other._L)
        v1, n1, d1 = self._lift(L)
        v2, n2, d2 = other._lift(L)
        m = min(v1, v2)
        n1 = _shift(n1, v1 - m)
        n2 = _shift(n2, v2 - m)
        if d1 == d2:
            return _normalize(m, kz.add(n1, n2), d1, L)
        if len(d1) == 1 and len(d2) == 1:
            return _normalize(m, kz.add(kz.scale(n1, d2[0]), kz.scale(n2, d1[0])), [d1[0] * d2[0]], L)
        g = kz.gcd(d1, d2)
        if len(g) > 1:
            e1 = kz.divexact(d1, g)
            e2 = kz.divexact(d2, g)
        else:
            e1, e2 = d1, d2
        num = kz.add(kz.mul(n1, e2), kz.mul(n2, e1))
        return _normalize(m, num, kz.mul(kz.mul(e1, e2), g), L)

    __radd__ = __add__

    def __neg__(self):
        if not self._num:
            return self
        return QRat._raw(self._v, [-c for c in self._num], self._den, self._L)

    def __sub__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num or not other._num:
            return _ZERO
        L = _lcm(self._L, other._L)
        v1, n1, d1 = self._lift(L)
        v2, n2, d2 = other._lift(L)
        if len(n1) > 1 and len(d2) > 1:
            g = kz.gcd(n1, d2)
            if len(g) > 1:
                n1, d2 = kz.divexact(n1, g), kz.divexact(d2, g)
        if len(n2) > 1 and len(d1) > 1:
            g = kz.gcd(n2, d1)
            if len(g) > 1:
                n2, d1 = kz.divexact(n2, g), kz.divexact(d1, g)
        return _normalize(v1 + v2, kz.mul(n1, n2), kz.mul(d1, d2), L, reduced=True)

    __rmul__ = __mul__

    def inv(self):
        if not self._num:
            raise DivisionByZero("inverse of zero")
        return _normalize(-self._v, self._den, self._num, self._L, reduced=True)

    def __truediv__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = QRat._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return self.inv() ** (-n)
        result, base = _ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # substitutions and evaluation --------------------------------------
    def subs_power(self, r):
        """Substitute q -> q**r for a nonzero integer r."""
        if r == 1 or not self._num:
            return self
        if r == 0:
            raise ValueError("q -> 1 is not a substitution; use value_at_one")
        s = abs(r)
        if r > 0:
            return QRat._raw(self._v * s, _stretch(self._num, s), _stretch(self._den, s), self._L)
        n = _stretch(self._num[::-1], s)
        d = _stretch(self._den[::-1], s)
        v = self._v * r - s * (len(self._num) - len(self._den))
        return _normalize(v, n, d, self._L, reduced=True)

    def value_at_one(self):
        """Limit q -> 1, as a Fraction (raises if there is a pole at q = 1)."""
        n, d = sum(self._num), sum(self._den)
        if d == 0:
            if n == 0:
                raise NotImplementedError("0/0 at q=1")
            raise DenominatorVanishesAtPoint("pole at q=1")
        return Fraction(n, d)

    def eval(self, q0):
        q0 = q0.q0 if isinstance(q0, NumScalar) else complex(q0)
        if not self._num:
            return 0j
        h = cmath.log(q0)
        t0 = cmath.exp(h / self._L)
        d = kz.eval_complex(self._den, t0)
        if d == 0:
            raise DenominatorVanishesAtPoint(f"denominator vanishes at q={q0}")
        return cmath.exp(h * self._v / self._L) * kz.eval_complex(self._num, t0) / d

    # output ---------------------------------------------------------------
    def to_json(self):
        def enc(terms):
            return {f"{e.numerator}/{e.denominator}": str(c) for e, c in sorted(terms.items())}

        return {"num": enc(self.num_terms()), "den": enc(self.den_terms())}

    @classmethod
    def from_json(cls, obj):
        def dec(d):
            return {Fraction(k): int(c) for k, c in d.items()}

        return cls.from_terms(dec(obj["num"]), dec(obj["den"]))

    def __repr__(self):
        return f"QRat({self})"

    def __str__(self):
        n = _laurent_str(self.num_terms())
        if self._den == [1]:
            return n
        d = _laurent_str(self.den_terms())
        if len(self._num) > 1:
            n = f"({n})"
        if len(self._den) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def latex(self):
        n = _laurent_latex(self.num_terms())
        if self._den == [1]:
            return n
        return r"\frac{" + n + "}{" + _laurent_latex(self.den_terms()) + "}"


def _exp_str(e):
    return str(e) if e.denominator == 1 else f"({e})"


def _laurent_str(terms):
    if not terms:
        return "0"
    parts = []
    for e, c in sorted(terms.items(), reverse=True):
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{_exp_str(e)}")
        if mono == "":
            s = str(abs(c))
        elif abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


def _laurent_latex(terms):
    if not terms:
        return "0"
    out = ""
    for k, (e, c) in enumerate(sorted(terms.items(), reverse=True)):
        if e == 0:
            mono = ""
        elif e == 1:
            mono = "q"
        else:
            mono = "q^{" + (str(e) if e.denominator == 1 else rf"{e.numerator}/{e.denominator}") + "}"
        a = abs(c)
        body = str(a) if not mono else (mono if a == 1 else f"{a}{mono}")
        sign = "-" if c < 0 else "+"
        out += (("-" if sign == "-" else "") + body) if k == 0 else f" {sign} {body}"
    return out


_ZERO = QRat._raw(0, [], [1], 1)
_ONE = QRat._raw(0, [1], [1], 1)


def q_pow(e) -> QRat:
    """q**e for an integer or rational exponent e."""
    return QRat.from_terms({Fraction(e): 1})


def qint(m: int, d: int = 1) -> QRat:
    """The q-integer [m] in base q**d."""
    if m == 0:
        return _ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    return QRat.from_terms({d * (m - 1 - 2 * k): sign for k in range(m)})


def qfactorial(m: int, d: int = 1) -> QRat:
    r = _ONE
    for j in range(1, m + 1):
        r = r * qint(j, d)
    return r


def qbinom(s: int, r: int, d: int = 1) -> QRat:
    if r < 0 or r > s:
        return _ZERO
    r = min(r, s - r)
    num, den = _ONE, _ONE
    for j in range(r):
        num = num * qint(s - j, d)
        den = den * qint(j + 1, d)
    return num / den


# --------------------------------------------------------------------------
# truncated power series


def _one_like(c):
    return c.one_like() if hasattr(c, "one_like") else 1


class QSeries:
    """Power series in one variable truncated at order K (K+1 coefficients).

    Coefficients are QRat in the exact tower but any ring elements with
    + - * and division by int work (complex numbers, small matrices).
    Binary operations keep the smaller truncation order.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs, var="z"):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least one coefficient")
        self.var = var

    @property
    def K(self):
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, K, var="z"):
        zero = c - c
        return cls([c] + [zero] * K, var)

    @classmethod
    def from_poly(cls, coeffs, K, var="z", zero=None):
        coeffs = list(coeffs)
        zero = zero if zero is not None else coeffs[0] - coeffs[0]
        coeffs = coeffs[: K + 1] + [zero] * max(0, K + 1 - len(coeffs))
        return cls(coeffs, var)

    def _check(self, other):
        if other.var != self.var:
            raise ValueError(f"series in different variables: {self.var}, {other.var}")

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def truncate(self, K):
        if K > self.K:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[: K + 1], self.var)

    def __add__(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            K = min(self.K, other.K)
            return QSeries([self.coeffs[k] + other.coeffs[k] for k in range(K + 1)], self.var)
        c = list(self.coeffs)
        c[0] = c[0] + other
        return QSeries(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            K = min(self.K, other.K)
            a, b = self.coeffs, other.coeffs
            out = []
            for n in range(K + 1):
                acc = None
                for k in range(n + 1):
                    if _is_zero(a[k]) or _is_zero(b[n - k]):
                        continue
                    t = a[k] * b[n - k]
                    acc = t if acc is None else acc + t
                out.append(acc if acc is not None else a[0] * b[0] - a[0] * b[0])
            return QSeries(out, self.var)
        return QSeries([c * other for c in self.coeffs], self.var)

    def __rmul__(self, other):
        return QSeries([other * c for c in self.coeffs], self.var)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        return QSeries([c / other for c in self.coeffs], self.var)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.constant(_one_like(self.coeffs[0]), self.K, self.var)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        a = self.coeffs
        if _is_zero(a[0]):
            raise DivisionByZero("series with zero constant term is not invertible")
        inv0 = _one_like(a[0]) / a[0]
        b = [inv0]
        for n in range(1, self.K + 1):
            acc = a[1] * b[n - 1]
            for k in range(2, n + 1):
                acc = acc + a[k] * b[n - k]
            b.append(-(inv0 * acc))
        return QSeries(b, self.var)

    def scale_var(self, c):
        """Substitute var -> c*var."""
        out, p = [], None
        for k, a in enumerate(self.coeffs):
            p = _one_like(c) if k == 0 else p * c
            out.append(a * p)
        return QSeries(out, self.var)

    def eval_numeric(self, q0):
        return [eval_numeric(c, q0) for c in self.coeffs]

    def __repr__(self):
        return f"QSeries({self.var}, K={self.K}, {list(map(str, self.coeffs))})"


def _is_zero(c):
    if isinstance(c, QRat):
        return not c._num
    if isinstance(c, (int, float, complex, Fraction)):
        return c == 0
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return False


def series_exp(s: QSeries) -> QSeries:
    """exp(s) by the recursion n E_n = sum_k k s_k E_{n-k}; needs s_0 = 0.

    Matrix coefficients are allowed when they commute with each other.
    """
    a = s.coeffs
    if not _is_zero(a[0]):
        raise NonzeroConstantTerm("exp needs a zero constant term")
    E = [_one_like(a[0]) if not isinstance(a[0], (int, Fraction)) else 1]
    for n in range(1, s.K + 1):
        acc = None
        for k in range(1, n + 1):
            if _is_zero(a[k]):
                continue
            t = a[k] * E[n - k] * k
            acc = t if acc is None else acc + t
        E.append(acc / n if acc is not None else a[0])
    return QSeries(E, s.var)


def series_log(s: QSeries) -> QSeries:
    """log(s) for s with constant term 1."""
    a = s.coeffs
    c0 = a[0]
    if c0 != _one_like(c0):
        raise NonzeroConstantTerm("log needs constant term 1")
    zero = c0 - c0
    lg = [zero]
    for n in range(1, s.K + 1):
        acc = None
        for k in range(1, n):
            if _is_zero(lg[k]) or _is_zero(a[n - k]):
                continue
            t = lg[k] * a[n - k] * k
            acc = t if acc is None else acc + t
        lg.append(a[n] - acc / n if acc is not None else a[n])
    return QSeries(lg, s.var)


# --------------------------------------------------------------------------
# univariate polynomials and rational functions over the QRat field


class QPoly:
    """Polynomial in one variable with coefficients in a field (QRat or complex)."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs, var="v"):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)
        self.var = var

    @property
    def deg(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.var == other.var or not self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else QRat(0)

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly([other], self.var)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return QPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            return QPoly([c * other for c in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return QPoly([], self.var)
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if _is_zero(b):
                    continue
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        z = self.coeffs[0] - self.coeffs[0]
        return QPoly([z if c is None else c for c in out], self.var)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = other.deg
        inv = _one_like(other.lc) / other.lc
        if len(r) - 1 < db:
            return QPoly([], self.var), self
        q = [None] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if not _is_zero(c):
                for i in range(db + 1):
                    r[k + i] = r[k + i] - c * other.coeffs[i]
        return QPoly(q, self.var), QPoly(r[:db], self.var)

    def monic(self):
        if self.is_zero():
            return self
        inv = _one_like(self.lc) / self.lc
        return QPoly([c * inv for c in self.coeffs], self.var)

    def __call__(self, x):
        if not self.coeffs:
            return x - x if not isinstance(x, (int, Fraction)) else QRat(0)
        r = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            r = r * x + c
        return r

    def deriv(self):
        return QPoly([c * k for k, c in enumerate(self.coeffs)][1:], self.var)

    def series(self, K):
        zero = self.coeffs[0] - self.coeffs[0] if self.coeffs else QRat(0)
        return QSeries.from_poly(self.coeffs or [zero], K, self.var, zero)

    def __repr__(self):
        return f"QPoly({self.var}, {[str(c) for c in self.coeffs]})"

    def to_json(self):
        return {"var": self.var, "coeffs": [c.to_json() for c in self.coeffs]}

    def latex(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{{{k}}}")
            cl = c.latex()
            if mono and cl in ("1", "-1"):
                cl = cl[:-1]
            elif mono and ("+" in cl or " - " in cl):
                cl = f"({cl})"
            parts.append(cl + mono)
        return " + ".join(parts).replace("+ -", "- ") or "0"


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic()


class RatFunc:
    """P/Q in one variable over the QRat field, reduced.

    The denominator is scaled so its lowest nonzero coefficient is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly, den: QPoly | None = None):
        if den is None:
            den = QPoly([QRat(1)], num.var)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den = QPoly([], num.var), QPoly([QRat(1)], num.var)
            return
        g = poly_gcd(num, den)
        if g.deg > 0:
            num = divmod(num, g)[0]
            den = divmod(den, g)[0]
        low = next(c for c in den.coeffs if not _is_zero(c))
        inv = _one_like(low) / low
        self.num, self.den = num * inv, den * inv

    @property
    def var(self):
        return self.num.var

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(QPoly([other], self.var))
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            return RatFunc(self.num, self.den * other)
        return RatFunc(self.num * other.den, self.den * other.num)

    def __call__(self, x):
        d = self.den(x)
        if _is_zero(d):
            raise DenominatorVanishesAtPoint("rational function has a pole here")
        return self.num(x) / d

    def series(self, K):
        return self.num.series(K) * self.den.series(K).inverse()

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def latex(self):
        if self.den.deg == 0 and self.den.coeffs[0] == 1:
            return self.num.latex()
        return f"\\frac{{{self.num.latex()}}}{{{self.den.latex()}}}"


def rational_reconstruct(s: QSeries, max_deg: int):
    """Find P/Q with deg P, deg Q <= max_deg matching every coefficient of s.

    Uses the extended Euclidean algorithm on (x^n, S) over the QRat field,
    n = number of coefficients.  Returns a RatFunc, or None when no fraction
    within the degree bound matches.
    """
    n = len(s.coeffs)
    if n < 2 * max_deg + 2:
        raise InsufficientOrder(f"need {2 * max_deg + 2} coefficients, have {n}")
    one = _one_like(s.coeffs[0])
    zero = one - one
    r0 = QPoly([zero] * n + [one], s.var)
    r1 = QPoly(s.coeffs, s.var)
    t0, t1 = QPoly([], s.var), QPoly([one], s.var)
    while not r1.is_zero() and r1.deg > max_deg:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, t0 - quo * t1
    if r1.is_zero():
        return RatFunc(QPoly([], s.var))
    if t1.deg > max_deg or _is_zero(t1[0]):
        return None
    return RatFunc(r1, t1)


# --------------------------------------------------------------------------
# numeric evaluation


@dataclass(frozen=True)
class NumScalar:
    """A numeric evaluation point for q (and optionally v)."""

    q0: complex
    v0: complex | None = None
    seed: int | None = None

    def __post_init__(self):
        q0 = complex(self.q0)
        object.__setattr__(self, "q0", q0)
        if q0 == 0:
            raise InvalidEvaluationPoint("q0 must be nonzero")
        p = 1
        for n in range(1, 65):
            p *= q0
            if abs(p - 1) < 1e-12:
                raise InvalidEvaluationPoint(f"q0 is a root of unity of order {n}")

    @classmethod
    def random(cls, seed: int, v0=None):
        rng = random.Random(seed)
        r = rng.uniform(1.1, 1.4)
        theta = rng.uniform(-0.6, 0.6)
        return cls(cmath.rect(r, theta), v0, seed)

    @property
    def h(self):
        return cmath.log(self.q0)

    def qpow(self, e):
        return cmath.exp(self.h * Fraction(e))


def eval_numeric(x, q0):
    """Evaluate an exact object at q = q0 (complex or NumScalar)."""
    if isinstance(x, QRat):
        return x.eval(q0)
    if isinstance(x, (int, float, complex, Fraction)):
        return complex(x)
    if isinstance(x, QSeries):
        return QSeries([eval_numeric(c, q0) for c in x.coeffs], x.var)
    if isinstance(x, QPoly):
        return QPoly([eval_numeric(c, q0) for c in x.coeffs], x.var)
    if isinstance(x, RatFunc):
        return _NumRatFunc(eval_numeric(x.num, q0), eval_numeric(x.den, q0))
    raise TypeError(f"cannot evaluate {type(x).__name__}")


class _NumRatFunc:
    def __init__(self, num, den):
        self.num, self.den = num, den

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise DenominatorVanishesAtPoint("pole")
        return self.num(x) / d
