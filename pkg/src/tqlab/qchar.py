"""q-characters: iterative expansion for fundamental modules, sl2 KR strings, products."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .cartan import CartanDatum
from .ymono import (
    Monomial,
    QCharacter,
    SpectralPoint,
    TruncatedQCharacter,
    a_monomial,
    is_dominant,
    prefund_ellweight,
)


class BudgetExceeded(RuntimeError):
    pass


class UnsupportedType(ValueError):
    pass


class ExpansionFailed(RuntimeError):
    pass


SUPPORTED = {("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2)}


@dataclass(frozen=True)
class FMConfig:
    max_monomials: int = 4096
    max_height: int = 64

    def __post_init__(self):
        if self.max_monomials <= 0 or self.max_height <= 0:
            raise ValueError("FMConfig budgets must be positive")


def _strings(points, step):
    """Split a multiset of shifts (one anchor) into strings with the given step.

    Greedy from the lowest point; the resulting strings are pairwise in
    general position.
    """
    pool = dict(points)
    out = []
    while pool:
        start = min(pool)
        run = []
        s = start
        while pool.get(s, 0) > 0:
            run.append(s)
            pool[s] -= 1
            if not pool[s]:
                del pool[s]
            s += step
        out.append(run)
    return out


def _string_chain(top: SpectralPoint, length: int, dj: int):
    """Points of the successive A^{-1} factors of a KR string with top point ``top``."""
    return [top.shifted(dj * (1 - 2 * s)) for s in range(length)]


def _local_expansion(cd: CartanDatum, m: Monomial, j: int):
    """sl2 q-character at node j of the j-dominant part of m, as a list of
    (A^{-1} witness list, multiplicity) relative to m."""
    dj = cd.di(j)
    by_anchor: dict = {}
    for (i, p), e in m.items():
        if i == j and e > 0:
            by_anchor.setdefault(p.anchor, {})[p.shift] = e
    terms = [([], 1)]
    for anchor, pts in sorted(by_anchor.items()):
        for run in _strings(pts, 2 * dj):
            top = SpectralPoint(anchor, run[-1])
            chain = _string_chain(top, len(run), dj)
            options = [chain[:r] for r in range(len(run) + 1)]
            terms = [(w + [(j, p) for p in opt], c) for w, c in terms for opt in options]
    return terms


def fm_expand(cd: CartanDatum, top: Monomial, cfg: FMConfig | None = None):
    """Expansion from a dominant monomial by i-dominance completion.

    Returns (QCharacter, witnesses) where witnesses maps each monomial to
    one list of (node, point) with monomial = top * prod A^{-1}_{node,point}.
    """
    cfg = cfg or FMConfig()
    if not is_dominant(top):
        raise ExpansionFailed("starting monomial is not dominant")
    nodes = list(cd.nodes)
    total = {top: 1}
    colored = {top: {j: 0 for j in nodes}}
    witness = {top: []}
    amon_cache: dict = {}

    def amon(j, p):
        key = (j, p)
        if key not in amon_cache:
            amon_cache[key] = a_monomial(cd, j, p).inv()
        return amon_cache[key]

    heap = [(0, top)]
    seen = {top}
    done = set()
    while heap:
        h, m = heapq.heappop(heap)
        done.add(m)
        for j in nodes:
            if any(i == j and e < 0 for (i, _), e in m.items()):
                continue
            k = total[m] - colored[m][j]
            if k <= 0:
                continue
            for wl, c in _local_expansion(cd, m, j):
                m2 = m
                for jj, p in wl:
                    m2 = m2 * amon(jj, p)
                if m2 not in total:
                    if len(wl) + h > cfg.max_height:
                        raise BudgetExceeded(f"height above {cfg.max_height}")
                    if len(total) >= cfg.max_monomials:
                        raise BudgetExceeded(f"more than {cfg.max_monomials} monomials")
                    total[m2] = 0
                    colored[m2] = {jj: 0 for jj in nodes}
                    witness[m2] = witness[m] + wl
                colored[m2][j] += k * c
                if colored[m2][j] > total[m2]:
                    total[m2] = colored[m2][j]
                if m2 not in seen:
                    if m2 in done:
                        raise ExpansionFailed("monomial reached after it was processed")
                    seen.add(m2)
                    heapq.heappush(heap, (h + len(wl), m2))
    for m in total:
        for j in nodes:
            j_dom = not any(i == j and e < 0 for (i, _), e in m.items())
            if not j_dom and colored[m][j] != total[m]:
                raise ExpansionFailed(f"monomial {m.latex()} is not {j}-colored")
    return QCharacter(total), witness


def _check_supported(cd):
    if (cd.type, cd.rank) not in SUPPORTED:
        raise UnsupportedType(f"{cd.label} is outside the supported list")


def fm_fundamental(cd: CartanDatum, i: int, a: SpectralPoint, cfg: FMConfig | None = None,
                   with_witnesses=False):
    """q-character of the fundamental module L(Y_{i,a})."""
    _check_supported(cd)
    if i not in cd.nodes:
        raise ValueError(f"node {i} outside 1..{cd.rank}")
    chi, wit = fm_expand(cd, Monomial.Y(i, a), cfg)
    chi.tag = f"L(Y_{{{i},{a.latex()}}})"
    return (chi, wit) if with_witnesses else chi


def kr_sl2(k: int, a: SpectralPoint, with_witnesses=False):
    """q-character of the sl2 KR module W_{k, a q^{1-2k}}.

    Highest monomial Y_{aq^{-1}} Y_{aq^{-3}} ... Y_{aq^{1-2k}}; the r-th
    term divides by A_{a} A_{aq^{-2}} ... A_{aq^{-2(r-1)}}.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    from .cartan import build_cartan

    cd = build_cartan("A", 1)
    top = Monomial({(1, a.shifted(1 - 2 * s)): 1 for s in range(1, k + 1)})
    terms, wits = {}, {}
    m, wl = top, []
    for r in range(k + 1):
        terms[m] = 1
        wits[m] = list(wl)
        if r < k:
            p = a.shifted(-2 * r)
            m = m * a_monomial(cd, 1, p).inv()
            wl.append((1, p))
    chi = QCharacter(terms, tag=f"W_{{{k},{a.shifted(1 - 2 * k).latex()}}}")
    return (chi, wits) if with_witnesses else chi


def multiply(x: QCharacter, y: QCharacter) -> QCharacter:
    return x * y


def dominant_monomials(x: QCharacter):
    return [(m, c) for m, c in x.items() if is_dominant(m)]


def neg_prefund_sl2(a: SpectralPoint, depth: int) -> TruncatedQCharacter:
    """First depth+1 terms of the normalized q-character of L^-_{1,a} for sl2."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    from .cartan import build_cartan

    cd = build_cartan("A", 1)
    terms = {}
    m = Monomial()
    for r in range(depth + 1):
        terms[m] = 1
        m = m * a_monomial(cd, 1, a.shifted(-2 * r)).inv()
    return TruncatedQCharacter(terms, depth, prefund_ellweight(cd, 1, a, -1),
                               tag=f"L^-_{{1,{a.latex()}}}")


def witness_product(cd: CartanDatum, top: Monomial, witnesses) -> Monomial:
    m = top
    for j, p in witnesses:
        m = m * a_monomial(cd, j, p).inv()
    return m

