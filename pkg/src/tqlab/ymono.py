"""Spectral points, Y-monomials, q-characters and l-weights.

A spectral point is ``anchor * q**shift`` with a symbolic anchor.  Points on
different anchors are treated as generic with respect to each other and are
never compared.  Whenever a computation needs an actual rational function
of z, a single shared anchor is normalized to 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .cartan import CartanDatum, WeightVector
from .scalars import QRat, QSeries, q_pow


class MixedAnchors(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SpectralPoint:
    anchor: str
    shift: Fraction

    def __post_init__(self):
        object.__setattr__(self, "shift", Fraction(self.shift))

    def shifted(self, s) -> "SpectralPoint":
        return SpectralPoint(self.anchor, self.shift + Fraction(s))

    def qrat(self) -> QRat:
        """Value with the anchor normalized to 1."""
        return q_pow(self.shift)

    def value(self, q0, anchor_values=None) -> complex:
        import cmath

        base = 1.0 if anchor_values is None else complex(anchor_values[self.anchor])
        return base * cmath.exp(cmath.log(complex(q0)) * self.shift)

    def latex(self) -> str:
        s = self.shift
        if s == 0:
            qs = ""
        elif s == 1:
            qs = "q"
        else:
            qs = "q^{" + (str(s) if s.denominator == 1 else f"{s.numerator}/{s.denominator}") + "}"
        if self.anchor == "1":
            return qs or "1"
        return self.anchor + qs

    def __str__(self):
        return self.latex()


def point(shift=0, anchor="a") -> SpectralPoint:
    return SpectralPoint(anchor, Fraction(shift))


class Monomial:
    """Laurent monomial in the Y_{i,a}; keys (i, anchor, shift) -> exponent."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exps=None):
        d = {}
        for key, e in (exps or {}).items():
            if isinstance(key[1], SpectralPoint):
                key = (key[0], key[1].anchor, key[1].shift)
            key = (int(key[0]), str(key[1]), Fraction(key[2]))
            d[key] = d.get(key, 0) + int(e)
        self._items = tuple(sorted((k, e) for k, e in d.items() if e))
        self._hash = hash(self._items)

    @classmethod
    def Y(cls, i, p: SpectralPoint, power=1):
        return cls({(i, p.anchor, p.shift): power})

    def items(self):
        """Iterate ((i, SpectralPoint), exponent) in canonical order."""
        return [((k[0], SpectralPoint(k[1], k[2])), e) for k, e in self._items]

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._items == other._items

    def __lt__(self, other):
        return self._items < other._items

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return True

    def is_one(self):
        return not self._items

    def __mul__(self, other):
        d = dict(self._items)
        for k, e in other._items:
            d[k] = d.get(k, 0) + e
        return Monomial(d)

    def inv(self):
        return Monomial({k: -e for k, e in self._items})

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n):
        return Monomial({k: e * n for k, e in self._items})

    def shifted(self, s):
        s = Fraction(s)
        return Monomial({(k[0], k[1], k[2] + s): e for k, e in self._items})

    def anchors(self):
        return sorted({k[1] for k, _ in self._items})

    def exponent(self, i, p: SpectralPoint):
        return dict(self._items).get((i, p.anchor, p.shift), 0)

    def node_exponents(self, rank):
        out = [0] * rank
        for k, e in self._items:
            out[k[0] - 1] += e
        return out

    def latex(self):
        if not self._items:
            return "1"
        out = []
        for (i, p), e in self.items():
            s = f"Y_{{{i},{p.latex()}}}"
            if e != 1:
                s += f"^{{{e}}}"
            out.append(s)
        return "".join(out)

    def to_json(self):
        return [
            {"i": k[0], "anchor": k[1], "shift": f"{k[2].numerator}/{k[2].denominator}", "power": e}
            for k, e in self._items
        ]

    @classmethod
    def from_json(cls, items):
        return cls({(o["i"], o["anchor"], Fraction(o["shift"])): o["power"] for o in items})

    def __repr__(self):
        return f"Monomial({self.latex()})"


ONE = Monomial()


def Y(i, shift=0, anchor="a", power=1) -> Monomial:
    return Monomial({(i, anchor, Fraction(shift)): power})


def a_monomial(cd: CartanDatum, i: int, a: SpectralPoint) -> Monomial:
    """A_{i,a}."""
    di = cd.di(i)
    m = Monomial.Y(i, a.shifted(-di)) * Monomial.Y(i, a.shifted(di))
    for j in cd.nodes:
        if j == i:
            continue
        c = cd.c(j, i)
        if c == -1:
            shifts = [0]
        elif c == -2:
            shifts = [-1, 1]
        elif c == -3:
            shifts = [-2, 0, 2]
        else:
            continue
        for s in shifts:
            m = m * Monomial.Y(j, a.shifted(s), -1)
    return m


def weight_of(m: Monomial, cd: CartanDatum) -> WeightVector:
    return WeightVector(m.node_exponents(cd.rank))


def is_dominant(m: Monomial) -> bool:
    return all(e > 0 for _, e in m._items)


# --------------------------------------------------------------------------
# q-characters


class QCharacter:
    """Finite formal sum of monomials with integer multiplicities."""

    truncated = False

    def __init__(self, terms=None, tag=None):
        d = {}
        for m, c in (terms.items() if isinstance(terms, dict) else (terms or [])):
            d[m] = d.get(m, 0) + c
        self.terms = {m: c for m, c in d.items() if c}
        self.tag = tag

    @classmethod
    def single(cls, m: Monomial, tag=None):
        return cls({m: 1}, tag)

    def monomials(self):
        return sorted(self.terms)

    def items(self):
        return [(m, self.terms[m]) for m in sorted(self.terms)]

    def size(self):
        return sum(self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, QCharacter) and self.terms == other.terms

    def __add__(self, other):
        self._compatible(other)
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, 0) + c
        return self._like(d, other)

    def _compatible(self, other):
        if self.truncated != other.truncated:
            raise TypeError("cannot combine truncated and untruncated q-characters")

    def _like(self, d, other=None):
        return QCharacter(d)

    def __mul__(self, other):
        self._compatible(other)
        d = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                d[m] = d.get(m, 0) + c1 * c2
        return self._like(d, other)

    def shifted(self, s):
        return QCharacter({m.shifted(s): c for m, c in self.terms.items()}, self.tag)

    def anchors(self):
        return sorted({a for m in self.terms for a in m.anchors()})

    def latex(self):
        parts = []
        for m, c in self.items():
            body = m.latex()
            parts.append(body if c == 1 else f"{c}{body}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "tag": self.tag,
            "terms": [{"monomial": m.to_json(), "mult": c} for m, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj):
        return cls({Monomial.from_json(t["monomial"]): t["mult"] for t in obj["terms"]}, obj.get("tag"))

    def __repr__(self):
        return f"QCharacter({self.latex()})"


class TruncatedQCharacter(QCharacter):
    """First ``depth + 1`` terms of an infinite q-character with an l-weight prefactor."""

    truncated = True

    def __init__(self, terms, depth, prefactor=None, tag=None):
        super().__init__(terms, tag)
        self.depth = depth
        self.prefactor = prefactor

    def _like(self, d, other=None):
        depth = self.depth if other is None else min(self.depth, other.depth)
        return TruncatedQCharacter(d, depth, None)


# --------------------------------------------------------------------------
# l-weights


class ElComp:
    """One component of an l-weight: scalar * prod (1 - b z)^e over spectral points b."""

    __slots__ = ("scalar", "factors", "_hash")

    def __init__(self, scalar=None, factors=None):
        self.scalar = QRat(1) if scalar is None else QRat(scalar)
        self.factors = tuple(sorted((p, e) for p, e in (factors or {}).items() if e))
        self._hash = hash((self.scalar, self.factors))

    def __eq__(self, other):
        return self.scalar == other.scalar and self.factors == other.factors

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        d = dict(self.factors)
        for p, e in other.factors:
            d[p] = d.get(p, 0) + e
        return ElComp(self.scalar * other.scalar, d)

    def inv(self):
        return ElComp(self.scalar.inv(), {p: -e for p, e in self.factors})

    def is_one(self):
        return not self.factors and self.scalar == 1

    def anchors(self):
        return sorted({p.anchor for p, _ in self.factors})

    def series(self, K, var="z"):
        """Expansion in z (single anchor normalized to 1)."""
        if len(self.anchors()) > 1:
            raise MixedAnchors("several anchors in one rational l-weight")
        out = QSeries.constant(self.scalar, K, var)
        for p, e in self.factors:
            b = p.qrat()
            lin = QSeries.from_poly([QRat(1), -b], K, var)
            out = out * (lin ** e)
        return out

    def numeric(self, z, q0, anchor_values=None):
        val = complex(self.scalar.eval(q0))
        for p, e in self.factors:
            val *= (1 - p.value(q0, anchor_values) * z) ** e
        return val


class EllWeight:
    """Tuple over the nodes of rational l-weight components."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = tuple(comps)

    @classmethod
    def one(cls, rank):
        return cls([ElComp() for _ in range(rank)])

    def __eq__(self, other):
        return isinstance(other, EllWeight) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __mul__(self, other):
        return EllWeight(a * b for a, b in zip(self.comps, other.comps, strict=True))

    def inv(self):
        return EllWeight(c.inv() for c in self.comps)

    def __truediv__(self, other):
        return self * other.inv()

    def is_one(self):
        return all(c.is_one() for c in self.comps)

    def at_zero(self):
        """Constant terms, i.e. the ordinary weight as q-powers."""
        return tuple(c.scalar for c in self.comps)

    def series(self, K, var="z"):
        return tuple(c.series(K, var) for c in self.comps)

    def __repr__(self):
        return f"EllWeight({[(str(c.scalar), [(str(p), e) for p, e in c.factors]) for c in self.comps]})"


def eval_ell_weight(cd: CartanDatum, m: Monomial, anchor_values=None) -> EllWeight:
    """Y_{i,a} -> q_i (1 - a q_i^{-1} z) / (1 - a q_i z) at node i."""
    if len(m.anchors()) > 1 and anchor_values is None:
        raise MixedAnchors("symbolic l-weight across several anchors")
    comps = [ElComp() for _ in cd.nodes]
    for (i, p), e in m.items():
        di = cd.di(i)
        f = ElComp(q_pow(di), {p.shifted(-di): 1, p.shifted(di): -1})
        if e < 0:
            f = f.inv()
        for _ in range(abs(e)):
            comps[i - 1] = comps[i - 1] * f
    return EllWeight(comps)


def prefund_ellweight(cd: CartanDatum, i: int, a: SpectralPoint, sign: int = 1) -> EllWeight:
    """Psi_{i,a}^{sign}: (1 - z a)^{sign} at node i, 1 elsewhere."""
    comps = [ElComp() for _ in cd.nodes]
    comps[i - 1] = ElComp(None, {a: sign})
    return EllWeight(comps)


def const_ellweight(cd: CartanDatum, lam) -> EllWeight:
    """l-weight of the one-dimensional representation [lam]: q_i^{lam_i} at node i."""
    return EllWeight(ElComp(q_pow(Fraction(lam[i - 1]) * cd.di(i))) for i in cd.nodes)


_Y_TOKEN = re.compile(r"Y_\{(\d+),\s*([A-Za-pr-z]?)(1|q(?:\^\{?(-?\d+(?:/\d+)?)\}?)?)?\}(?:\^\{?(-?\d+)\}?)?")


def parse_monomial_latex(s: str) -> Monomial:
    """Inverse of Monomial.latex, also accepting unbraced exponents (q^2, ^{-1})."""
    s = s.strip()
    if s == "1":
        return Monomial()
    exps: dict = {}
    pos = 0
    for m in _Y_TOKEN.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"cannot parse {s[pos:m.start()]!r}")
        pos = m.end()
        i, anchor, qpart, qexp, power = m.groups()
        if not anchor and not qpart:
            raise ValueError(f"empty spectral point in {m.group(0)!r}")
        if qpart in (None, "1"):
            shift = Fraction(0)
        else:
            shift = Fraction(qexp) if qexp else Fraction(1)
        key = (int(i), anchor or "1", shift)
        exps[key] = exps.get(key, 0) + (int(power) if power else 1)
    if s[pos:].strip():
        raise ValueError(f"cannot parse {s[pos:]!r}")
    return Monomial(exps)


def parse_qchar_latex(s: str) -> QCharacter:
    """Sum of monomials, each optionally preceded by an integer multiplicity."""
    terms: dict = {}
    for part in s.replace("$", "").split("+"):
        part = part.strip()
        lead = re.match(r"(\d+)(?=Y|$)", part)
        c = 1
        if lead and part != "1":
            c = int(lead.group(1))
            part = part[lead.end():] or "1"
        m = parse_monomial_latex(part)
        terms[m] = terms.get(m, 0) + c
    return QCharacter(terms)
