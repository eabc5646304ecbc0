"""Generalized Bethe equations: generation, closed single-root solution, numeric solving.

Every equation has the shape

    v_i * prod(lhs factors) = prod(rhs factors)

where a factor ``pref * (w - cn * X) / (w - cd * X)`` involves the equation's
own variable w and either X = 1 or another Bethe variable.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .cartan import CartanDatum
from .scalars import QPoly, QRat, RatFunc, q_pow


class NotSingleRoot(ValueError):
    pass


class DegenerateLinearSystem(ArithmeticError):
    pass


class NoConvergence(RuntimeError):
    def __init__(self, msg, best_residual=None):
        super().__init__(msg)
        self.best_residual = best_residual


@dataclass(frozen=True)
class Factor:
    pref: QRat
    cn: object
    cd: object
    other: tuple | None = None

    def key(self):
        return (self.other or (0, 0), str(self.pref), str(self.cn), str(self.cd))

    def numeric(self, w, xs, q0):
        x = 1 if self.other is None else xs[self.other]
        return _num(self.pref, q0) * (w - _num(self.cn, q0) * x) / (w - _num(self.cd, q0) * x)

    def parts(self, w, xs, q0):
        x = 1 if self.other is None else xs[self.other]
        return (_num(self.pref, q0) * (w - _num(self.cn, q0) * x), w - _num(self.cd, q0) * x)

    def to_json(self):
        return {"pref": _enc(self.pref), "cn": _enc(self.cn), "cd": _enc(self.cd),
                "other": list(self.other) if self.other else None}


def _num(x, q0):
    if isinstance(x, QRat):
        return complex(x.eval(q0))
    if isinstance(x, tuple):
        return complex(x[0].eval(q0)) * x[1]
    return complex(x)


def _enc(x):
    if isinstance(x, QRat):
        return {"qrat": x.to_json()}
    if isinstance(x, tuple):
        return {"qrat": x[0].to_json(), "complex": [x[1].real, x[1].imag]}
    x = complex(x)
    return {"complex": [x.real, x.imag]}


@dataclass(frozen=True)
class Equation:
    i: int
    k: int
    lhs: tuple
    rhs: tuple
    scale: complex = 1

    def residual(self, w_all, q0, v0):
        w = w_all[(self.i, self.k)]
        lhs = complex(v0[self.i - 1]) * self.scale
        for f in self.lhs:
            lhs *= f.numeric(w, w_all, q0)
        rhs = 1 + 0j
        for f in self.rhs:
            rhs *= f.numeric(w, w_all, q0)
        return lhs - rhs

    def cleared(self, w_all, q0, v0):
        """v*prod(lhs num)*prod(rhs den) - prod(rhs num)*prod(lhs den)."""
        w = w_all[(self.i, self.k)]
        ln, ld, rn, rd = complex(v0[self.i - 1]) * self.scale, 1 + 0j, 1 + 0j, 1 + 0j
        for f in self.lhs:
            a, b = f.parts(w, w_all, q0)
            ln, ld = ln * a, ld * b
        for f in self.rhs:
            a, b = f.parts(w, w_all, q0)
            rn, rd = rn * a, rd * b
        return ln * rd - rn * ld

    def denominators(self, w_all, q0):
        w = w_all[(self.i, self.k)]
        return [f.parts(w, w_all, q0)[1] for f in self.lhs + self.rhs]

    def relabeled(self, perm):
        def mv(f):
            return Factor(f.pref, f.cn, f.cd, perm.get(f.other, f.other) if f.other else None)

        i, k = perm.get((self.i, self.k), (self.i, self.k))
        return Equation(i, k, tuple(sorted(map(mv, self.lhs), key=Factor.key)),
                        tuple(sorted(map(mv, self.rhs), key=Factor.key)))

    def to_json(self):
        return {"i": self.i, "k": self.k, "lhs": [f.to_json() for f in self.lhs],
                "rhs": [f.to_json() for f in self.rhs]}

    def latex(self):
        def var(i, k):
            return f"w^{{({i})}}_{{{k}}}"

        def fac(f, i, k):
            x = "" if f.other is None else var(*f.other)
            cn = _coef_latex(f.cn, x)
            cdn = _coef_latex(f.cd, x)
            pref = "" if f.pref == 1 else f.pref.latex()
            return f"{pref}\\frac{{{var(i, k)} - {cn}}}{{{var(i, k)} - {cdn}}}"

        lhs = f"v_{{{self.i}}}" + "".join(fac(f, self.i, self.k) for f in self.lhs)
        rhs = "".join(fac(f, self.i, self.k) for f in self.rhs) or "1"
        return f"{lhs} = {rhs}"


def _coef_latex(c, x):
    if isinstance(c, QRat):
        if c == 1:
            return x or "1"
        return c.latex() + x
    if isinstance(c, tuple):
        return c[0].latex() + f"({c[1]:.6g})" + x
    return f"({complex(c):.6g})" + x


@dataclass
class BetheSystem:
    cartan: CartanDatum
    zeros: dict
    counts: tuple
    equations: list = field(default_factory=list)

    @property
    def size(self):
        return sum(self.counts)

    def variables(self):
        return [(i, k) for i in self.cartan.nodes for k in range(1, self.counts[i - 1] + 1)]

    def relabeled(self, perm):
        return {e.relabeled(perm) for e in self.equations}

    def equation_set(self):
        return {e.relabeled({}) for e in self.equations}

    def to_json(self):
        return {
            "type": self.cartan.label,
            "counts": list(self.counts),
            "equations": [e.to_json() for e in self.equations],
        }

    def latex(self):
        return "\n".join(e.latex() for e in self.equations)


def bethe_system(cd: CartanDatum, zeros, counts) -> BetheSystem:
    """Equations for Drinfeld data given by the zeros rho of each P_i(x) = prod (1 - x/rho).

    ``zeros`` maps node -> list of rho values (QRat or complex); a
    TargetModuleData is accepted and converted (rho = 1/b for each Y_{i,b}).
    """
    if hasattr(zeros, "roots"):
        data = zeros
        zeros = {i: [q_pow(-p.shift) for p, e in data.roots(i) for _ in range(e)] for i in cd.nodes}
    counts = tuple(counts)
    if len(counts) != cd.rank or any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative, one per node")
    eqs = []
    for i in cd.nodes:
        di = cd.di(i)
        qi = q_pow(di)
        for k in range(1, counts[i - 1] + 1):
            lhs = []
            for rho in zeros.get(i, []):
                inv = rho.inv() if isinstance(rho, QRat) else 1 / complex(rho)
                lhs.append(Factor(qi, _mulc(q_pow(-di), inv), _mulc(qi, inv)))
            rhs = []
            for s in range(1, counts[i - 1] + 1):
                if s != k:
                    rhs.append(Factor(qi ** 2, q_pow(-2 * di), q_pow(2 * di), (i, s)))
            for l in cd.nodes:
                if l == i:
                    continue
                c = cd.c(l, i)
                if c == 0:
                    continue
                for s in range(1, counts[l - 1] + 1):
                    rhs.append(Factor(q_pow(c), q_pow(-c), q_pow(c), (l, s)))
            eqs.append(Equation(i, k, tuple(sorted(lhs, key=Factor.key)), tuple(sorted(rhs, key=Factor.key))))
    return BetheSystem(cd, zeros, counts, eqs)


def _mulc(a: QRat, b):
    if isinstance(b, QRat):
        return a * b
    return (a, complex(b))


def sl2_kr_zeros(strings):
    """Zeros for W = tensor of KR modules W_{R, b q^{1-R}}; strings = [(b_shift, R), ...]."""
    out = []
    for b, R in strings:
        for t in range(R):
            out.append(q_pow(-(b - R + 1 + 2 * t)))
    return {1: out}


# --------------------------------------------------------------------------
# exact single-root solution


def _cancel(nums, dens):
    nums, dens = list(nums), list(dens)
    for c in list(nums):
        if c in dens:
            nums.remove(c)
            dens.remove(c)
    return nums, dens


def solve_closed_single(sys: BetheSystem) -> RatFunc:
    """The root of a one-variable system as an exact rational function of v."""
    if sys.size != 1:
        raise NotSingleRoot(f"system has {sys.size} variables")
    (eq,) = sys.equations
    if eq.rhs:
        raise NotSingleRoot("right side should be empty for a single variable")
    pref = QRat(1)
    for f in eq.lhs:
        if not (isinstance(f.cn, QRat) and isinstance(f.cd, QRat)):
            raise DegenerateLinearSystem("closed form needs exact Drinfeld data")
        pref = pref * f.pref
    nums, dens = _cancel([f.cn for f in eq.lhs], [f.cd for f in eq.lhs])
    if len(nums) != 1 or len(dens) != 1:
        raise DegenerateLinearSystem("equation is not linear after cancellation")
    alpha, beta = nums[0], dens[0]
    # v*pref*(w - alpha) = w - beta  =>  w = (v*pref*alpha - beta) / (v*pref - 1)
    num = QPoly([-beta, pref * alpha], "v")
    den = QPoly([QRat(-1), pref], "v")
    w = RatFunc(num, den)
    if not closed_root_is_exact(eq, w):
        raise ArithmeticError("closed root fails exact substitution")
    return w


def closed_root_is_exact(eq: Equation, w: RatFunc) -> bool:
    """Substitute a RatFunc root into v*prod(lhs) - prod(rhs) and test for exact zero."""
    v = RatFunc(QPoly([QRat(0), QRat(1)], "v"))
    lhs = v
    for f in eq.lhs:
        lhs = lhs * (w - f.cn) / (w - f.cd) * f.pref
    return (lhs - RatFunc(QPoly([QRat(1)], "v"))).num.is_zero()


# --------------------------------------------------------------------------
# numeric solving


@dataclass
class BetheSolution:
    roots: dict
    residuals: list
    seed: int | None
    simple: bool

    def to_json(self):
        return {
            "roots": [[i, k, w.real, w.imag] for (i, k), w in sorted(self.roots.items())],
            "residuals": self.residuals,
            "seed": self.seed,
            "simple": self.simple,
        }


def _numeric_system(sys: BetheSystem, q0):
    """Same equations at q = q0, with matching constant zeros and poles cancelled."""
    out = []
    for e in sys.equations:
        scale = 1 + 0j
        nums, dens = [], []
        for f in e.lhs:
            scale *= _num(f.pref, q0)
            nums.append(_num(f.cn, q0))
            dens.append(_num(f.cd, q0))
        for c in list(nums):
            hit = next((d for d in dens if abs(d - c) < 1e-12 * (1 + abs(c))), None)
            if hit is not None:
                nums.remove(c)
                dens.remove(hit)
        lhs = tuple(Factor(1, a, b) for a, b in zip(nums, dens))
        rhs = tuple(Factor(_num(f.pref, q0), _num(f.cn, q0), _num(f.cd, q0), f.other) for f in e.rhs)
        out.append(Equation(e.i, e.k, lhs, rhs, scale))
    return out


def _verify(eqs, w_all, q0, v0, tol, pole_radius):
    res = [float(abs(e.residual(w_all, q0, v0))) for e in eqs]
    dens = [abs(d) for e in eqs for d in e.denominators(w_all, q0)]
    ok = all(r < tol for r in res) and all(d > pole_radius for d in dens) and all(abs(w) > pole_radius for w in w_all.values())
    return ok, res


def solve_numeric(sys: BetheSystem, q0, v0, seeds=8, tol=1e-9, pole_radius=1e-6, max_iter=200,
                  allow_coincident=False):
    """All roots for one variable; Newton with deflation from seeded starts otherwise."""
    q0 = complex(q0)
    v0 = [complex(x) for x in (v0 if isinstance(v0, (list, tuple)) else [v0] * sys.cartan.rank)]
    eqs = _numeric_system(sys, q0)
    variables = sys.variables()
    if not variables:
        return [BetheSolution({}, [], None, True)]
    if len(variables) == 1:
        (eq,) = eqs
        if eq.rhs:
            raise NotSingleRoot("unexpected right side")
        num = np.array([complex(v0[eq.i - 1]) * eq.scale])
        den = np.array([1 + 0j])
        for f in eq.lhs:
            num = np.polymul(num, np.array([f.pref, -f.pref * f.cn]))
            den = np.polymul(den, np.array([1, -f.cd]))
        poly = np.polysub(num, den)
        roots = np.roots(poly) if len(poly) > 1 else np.array([])
        out = []
        for r in roots:
            w_all = {variables[0]: complex(r)}
            ok, res = _verify(eqs, w_all, q0, v0, tol, pole_radius)
            if ok:
                out.append(BetheSolution(w_all, res, None, True))
        return out
    return _newton_multistart(eqs, variables, q0, v0, seeds, tol, pole_radius, max_iter, allow_coincident)


def _newton_multistart(*args):
    with np.errstate(all="ignore"):
        return _newton_inner(*args)


def _newton_inner(eqs, variables, q0, v0, seeds, tol, pole_radius, max_iter, allow_coincident):
    n = len(variables)
    found: list = []
    sols = []
    pairs = [(a, b) for a in range(n) for b in range(a) if variables[a][0] == variables[b][0]]
    best = np.inf
    for seed in range(seeds):
        rng = random.Random(seed)
        x = np.array([cmath.rect(math.exp(rng.uniform(-2.5, 2.5)), rng.uniform(-math.pi, math.pi))
                      for _ in range(n)])

        def F(x):
            w_all = dict(zip(variables, x))
            val = np.array([e.cleared(w_all, q0, v0) for e in eqs])
            for sol in found:
                d = np.linalg.norm(x - sol)
                val = val * (1 + 1 / d**2)
            if not allow_coincident:
                for a, b in pairs:
                    val = val * (1 + 1 / abs(x[a] - x[b]) ** 2)
            return val

        for _ in range(max_iter):
            fx = F(x)
            if not np.all(np.isfinite(fx)) or np.linalg.norm(fx) < 1e-14:
                break
            # deflation is not holomorphic, so differentiate over R^{2n}
            J = np.empty((2 * n, 2 * n))
            h = 1e-7 * (1 + np.abs(x).max())
            for j in range(n):
                for col, dx in ((j, h), (n + j, 1j * h)):
                    e = np.zeros(n, dtype=complex)
                    e[j] = dx
                    d = (F(x + e) - fx) / h
                    J[:, col] = np.concatenate([d.real, d.imag])
            if not np.all(np.isfinite(J)):
                break
            try:
                sr = np.linalg.lstsq(J, np.concatenate([fx.real, fx.imag]), rcond=None)[0]
            except np.linalg.LinAlgError:
                break
            step = sr[:n] + 1j * sr[n:]
            cap = 10 * (1 + np.abs(x).max())
            norm = np.linalg.norm(step)
            if norm > cap:
                step *= cap / norm
            x = x - step
            if norm < 1e-15 * (1 + np.linalg.norm(x)):
                break
        if not np.all(np.isfinite(x)):
            continue
        w_all = {v: complex(w) for v, w in zip(variables, x)}
        ok, res = _verify(eqs, w_all, q0, v0, tol, pole_radius)
        best = min(best, max(res))
        if not ok:
            continue
        key = _canonical(variables, x)
        if any(np.allclose(key, _canonical(variables, s), atol=1e-7) for s in found):
            found.append(x)
            continue
        simple = all(abs(x[a] - x[b]) > pole_radius for a in range(n) for b in range(a))
        found.append(x)
        if simple or allow_coincident:
            sols.append(BetheSolution(w_all, res, seed, simple))
    if not sols:
        raise NoConvergence("no seed converged", best)
    return sols


def _canonical(variables, x):
    groups: dict = {}
    for (i, _), w in zip(variables, x):
        groups.setdefault(i, []).append(w)
    return np.array([w for i in sorted(groups) for w in sorted(groups[i], key=lambda c: (round(c.real, 9), round(c.imag, 9)))])
