"""Grothendieck-ring terms and generalized Baxter TQ relations.

A relation is stored with denominators cleared:

    [V] * prod(lhs prefundamentals) = sum_k c_k [lambda_k] * prod(prefundamentals_k)

Each side is a class of a tensor product of prefundamental modules with a
one-dimensional module, and such tensor products are simple, so every term
is the class of a simple object.  That fact is documentation only; nothing
here checks simplicity.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import CartanDatum, NotInRootCone, WeightVector, ht_decompose, parse_type
from .ymono import (
    EllWeight,
    Monomial,
    QCharacter,
    SpectralPoint,
    const_ellweight,
    eval_ell_weight,
    prefund_ellweight,
)

FLAVORS = ("L+", "R+", "L-", "R-")


class PrefundMultiset:
    """Multiset of prefundamental classes keyed by (sign, node, point)."""

    __slots__ = ("_items", "_hash")

    def __init__(self, counts=None):
        d = Counter()
        for key, n in (counts or {}).items():
            sign, i, p = key
            if sign not in "+-" or len(sign) != 1:
                raise ValueError(f"bad sign {sign!r}")
            if n < 0:
                raise ValueError("negative multiplicity")
            d[(sign, int(i), p)] += n
        self._items = tuple(sorted((k, n) for k, n in d.items() if n))
        self._hash = hash(self._items)

    @classmethod
    def single(cls, sign, i, p, n=1):
        return cls({(sign, i, p): n})

    def counts(self):
        return dict(self._items)

    def items(self):
        return list(self._items)

    def __eq__(self, other):
        return isinstance(other, PrefundMultiset) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._items < other._items

    def __len__(self):
        return sum(n for _, n in self._items)

    def __add__(self, other):
        c = Counter(self.counts())
        c.update(other.counts())
        return PrefundMultiset(c)

    def __sub__(self, other):
        c = Counter(self.counts())
        for k, n in other.counts().items():
            if c[k] < n:
                raise ValueError("multiset difference would go negative")
            c[k] -= n
        return PrefundMultiset(c)

    def __or__(self, other):
        c = dict(self.counts())
        for k, n in other.counts().items():
            c[k] = max(c.get(k, 0), n)
        return PrefundMultiset(c)

    def __and__(self, other):
        a, b = self.counts(), other.counts()
        return PrefundMultiset({k: min(n, b[k]) for k, n in a.items() if k in b})

    def node_counts(self, rank):
        out = [0] * rank
        for (_, i, _), n in self._items:
            out[i - 1] += n
        return tuple(out)

    def mapped(self, fn):
        c = Counter()
        for k, n in self._items:
            c[fn(k)] += n
        return PrefundMultiset(c)

    def to_json(self):
        return [
            {"sign": s, "i": i, "anchor": p.anchor,
             "shift": f"{p.shift.numerator}/{p.shift.denominator}", "mult": n}
            for (s, i, p), n in self._items
        ]

    @classmethod
    def from_json(cls, items):
        return cls({(o["sign"], o["i"], SpectralPoint(o["anchor"], Fraction(o["shift"]))): o["mult"]
                    for o in items})

    def __repr__(self):
        return f"PrefundMultiset({self.to_json()})"


@dataclass(frozen=True)
class TQTerm:
    weight: WeightVector
    prefund: PrefundMultiset
    coeff: int = 1

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("zero coefficient")
        object.__setattr__(self, "weight", WeightVector(self.weight))


@dataclass(frozen=True)
class TQRelation:
    cartan: str
    lhs_label: Monomial
    lhs_prefund: PrefundMultiset
    rhs: tuple
    flavor: str = "L+"
    notes: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")

    @property
    def family(self):
        return self.flavor[0]

    @property
    def sign(self):
        return self.flavor[1]

    def term_count(self):
        return sum(t.coeff for t in self.rhs)

    def to_json(self):
        return {
            "type": self.cartan,
            "flavor": self.flavor,
            "lhs": {"rep": self.lhs_label.to_json(), "prefund": self.lhs_prefund.to_json()},
            "rhs": [
                {"coeff": t.coeff, "weight": list(t.weight), "prefund": t.prefund.to_json()}
                for t in self.rhs
            ],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["type"],
            Monomial.from_json(obj["lhs"]["rep"]),
            PrefundMultiset.from_json(obj["lhs"]["prefund"]),
            tuple(TQTerm(WeightVector(t["weight"]), PrefundMultiset.from_json(t["prefund"]), t["coeff"])
                  for t in obj["rhs"]),
            obj["flavor"],
        )

    def latex(self):
        return relation_latex(self.to_json())


# --------------------------------------------------------------------------


def highest_monomial(cd: CartanDatum, chi: QCharacter) -> Monomial:
    """The monomial whose weight dominates every other weight of chi."""
    weights = {m: WeightVector(m.node_exponents(cd.rank)) for m in chi.terms}
    tops = []
    for m, w in weights.items():
        try:
            for w2 in weights.values():
                ht_decompose(cd, w, w2)
        except NotInRootCone:
            continue
        tops.append(m)
    if len(tops) != 1:
        raise ValueError("q-character has no unique highest monomial")
    return tops[0]


def _substitute(cd: CartanDatum, m: Monomial, sign: str):
    """Numerator and denominator multisets and weight for Y -> [w_i] P(aq_i^{-1}) / P(aq_i)."""
    num, den = Counter(), Counter()
    weight = [0] * cd.rank
    for (i, p), e in m.items():
        di = cd.di(i)
        lo, hi = (sign, i, p.shifted(-di)), (sign, i, p.shifted(di))
        if e > 0:
            num[lo] += e
            den[hi] += e
        else:
            num[hi] -= e
            den[lo] -= e
        weight[i - 1] += e
    common = num & den
    return PrefundMultiset(num - common), PrefundMultiset(den - common), WeightVector(weight)


def tq_relation(cd: CartanDatum, chi: QCharacter, flavor: str = "L+") -> TQRelation:
    """Baxter relation obtained from the q-character of a finite-dimensional module."""
    if flavor not in ("L+", "R+"):
        raise ValueError("relations are generated in the L+ or R+ flavor; use dualize for the others")
    if not chi.terms:
        raise ValueError("empty q-character")
    top = highest_monomial(cd, chi)
    parts = [(_substitute(cd, m, "+"), c) for m, c in chi.items()]
    lcm = PrefundMultiset()
    for (_, den, _), _ in parts:
        lcm = lcm | den
    collected: dict = {}
    for (num, den, w), c in parts:
        key = (w, num + (lcm - den))
        collected[key] = collected.get(key, 0) + c
    omega = WeightVector(top.node_exponents(cd.rank))
    terms = [TQTerm(w, pm, c) for (w, pm), c in collected.items() if c]
    terms.sort(key=lambda t: (sum(ht_decompose(cd, omega, t.weight)), tuple(-x for x in t.weight), t.prefund))
    return TQRelation(cd.label, top, lcm, tuple(terms), flavor)


def _prefund_image(cd: CartanDatum, pm: PrefundMultiset):
    ew = EllWeight.one(cd.rank)
    for (sign, i, p), n in pm.items():
        if sign != "+":
            raise ValueError("only positive prefundamentals have a product q-character")
        for _ in range(n):
            ew = ew * prefund_ellweight(cd, i, p, 1)
    return ew, pm.node_counts(cd.rank)


def verify_tq(cd: CartanDatum, rel: TQRelation, chi: QCharacter) -> bool:
    """Check the relation after replacing each class by its q-character.

    A positive prefundamental class becomes its highest l-weight times an
    opaque character symbol X_i; [lambda] becomes its constant l-weight.
    Negative flavors are checked through their dual relation.
    """
    if rel.sign == "-":
        rel = dualize(rel)
    try:
        if highest_monomial(cd, chi) != rel.lhs_label:
            return False
    except ValueError:
        return False
    side = Counter()
    lhs_ew, lhs_x = _prefund_image(cd, rel.lhs_prefund)
    for m, c in chi.items():
        ew = eval_ell_weight(cd, m, anchor_values={}) * lhs_ew
        side[(ew, lhs_x)] += c
    for t in rel.rhs:
        ew, x = _prefund_image(cd, t.prefund)
        side[(const_ellweight(cd, t.weight) * ew, x)] -= t.coeff
    return all(v == 0 for v in side.values())


def is_lowest_terms(rel: TQRelation) -> bool:
    """No prefundamental class divides the left side and every right-side term."""
    common = rel.lhs_prefund
    for t in rel.rhs:
        common = common & t.prefund
    return len(common) == 0


def dualize(rel: TQRelation, mode: str = "dual") -> TQRelation:
    """Rewrite a relation in a related flavor.

    ``mode="swap"`` exchanges L and R keeping every multiset.  ``mode="dual"``
    takes duals: signs of prefundamentals flip, L and R exchange, weights are
    negated and V becomes V*, whose highest monomial sits on the conjugate
    nodes with points moved by q^{-r h} (L to R) or q^{+r h} (R to L), where
    r is the lacing number and h the dual Coxeter number.
    """
    fam = {"L": "R", "R": "L"}
    if mode == "swap":
        return TQRelation(rel.cartan, rel.lhs_label, rel.lhs_prefund, rel.rhs,
                          fam[rel.family] + rel.sign)
    if mode != "dual":
        raise ValueError(f"unknown mode {mode!r}")
    cd = parse_type(rel.cartan)
    shift = cd.lacing * cd.dual_coxeter * (-1 if rel.family == "L" else 1)
    new_sign = "-" if rel.sign == "+" else "+"
    label = Monomial({(cd.involution[i], p.shifted(shift)): e for (i, p), e in rel.lhs_label.items()})

    def flip(k):
        return (new_sign, k[1], k[2])

    rhs = tuple(TQTerm(-t.weight, t.prefund.mapped(flip), t.coeff) for t in rel.rhs)
    return TQRelation(rel.cartan, label, rel.lhs_prefund.mapped(flip), rhs, fam[rel.family] + new_sign)


# --------------------------------------------------------------------------
# LaTeX


def _point_latex(anchor, shift):
    return SpectralPoint(anchor, Fraction(shift)).latex()


def _weight_latex(w):
    pos = [(i + 1, c) for i, c in enumerate(w) if c > 0]
    neg = [(i + 1, c) for i, c in enumerate(w) if c < 0]
    out = ""
    for i, c in pos + neg:
        mag = abs(c)
        body = ("" if mag == 1 else str(mag)) + f"\\omega_{i}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return f"[{out or '0'}]"


def _prefund_latex(items, family):
    out = []
    for o in sorted(items, key=lambda o: (o["i"], Fraction(o["shift"]))):
        tok = f"[{family}_{{{o['i']},{_point_latex(o['anchor'], o['shift'])}}}^{o['sign']}]"
        out.append(tok * o["mult"])
    return "".join(out)


def relation_latex(obj) -> str:
    """LaTeX for a relation in JSON form."""
    fam = obj["flavor"][0]
    rep = Monomial.from_json(obj["lhs"]["rep"]).latex()
    lhs = f"[L({rep})]" + _prefund_latex(obj["lhs"]["prefund"], fam)
    terms = []
    for t in obj["rhs"]:
        c = "" if t["coeff"] == 1 else str(t["coeff"])
        terms.append(c + _prefund_latex(t["prefund"], fam) + _weight_latex(t["weight"]))
    return lhs + " = " + " + ".join(terms)


_BRACKET = re.compile(r"\[([^\[\]]*)\]")
_OMEGA = re.compile(r"([+-]?)\s*(\d*)\s*\\omega_\{?(\d+)\}?")


def _norm_token(tok: str) -> str:
    tok = re.sub(r"\s+", "", tok)
    tok = re.sub(r"\^(-?\d)", r"^{\1}", tok)
    tok = re.sub(r"\\overline\{([^}]*)\}", r"\1", tok)
    return tok


def _parse_weight(tok: str):
    if tok.strip() == "0":
        return {}
    w: dict = {}
    for sign, mag, i in _OMEGA.findall(tok):
        c = int(mag or 1) * (-1 if sign == "-" else 1)
        w[int(i)] = w.get(int(i), 0) + c
    return {k: v for k, v in w.items() if v}


def normalize_relation_latex(s: str):
    """Canonical, order-insensitive form of a relation written in bracket notation."""
    s = s.replace("$", "").replace("\n", " ")
    lhs, rhs = s.split("=", 1)
    lhs_tokens = tuple(sorted(_norm_token(t) for t in _BRACKET.findall(lhs)))
    terms = []
    depth = 0
    cur = ""
    for ch in rhs:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "+" and depth == 0:
            terms.append(cur)
            cur = ""
        else:
            cur += ch
    terms.append(cur)
    out = []
    for t in terms:
        if not t.strip():
            continue
        m = re.match(r"\s*(\d*)", t)
        coeff = int(m.group(1)) if m.group(1) else 1
        pref, weight = [], {}
        for tok in _BRACKET.findall(t):
            if "omega" in tok or tok.strip() == "0":
                weight = _parse_weight(tok)
            else:
                pref.append(_norm_token(tok))
        out.append((coeff, tuple(sorted(pref)), tuple(sorted(weight.items()))))
    return lhs_tokens, tuple(sorted(out))
