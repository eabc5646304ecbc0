"""Command-line entry point.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for usage errors (bad flags, malformed scenario files, invalid input).
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import checks
from .bethe import bethe_system, sl2_kr_zeros, solve_closed_single, solve_numeric, NoConvergence
from .cartan import InvalidType, parse_type, quantum_cartan
from .grring import dualize, tq_relation
from .qchar import BudgetExceeded, UnsupportedType, fm_fundamental
from .scalars import NumScalar, q_pow
from .spectra import (
    TargetModuleData,
    eigenvalue_template,
    f_ratio_rational,
    f_series,
    template_witnesses,
)
from .ymono import parse_monomial_latex, point

DEFAULTS = {"K": 12, "Kv": 8, "M": 16}


class UsageError(Exception):
    pass


class ParseError(UsageError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}" + (f", column {col}" if col else "") if line else "input"
        super().__init__(f"{where}: {msg}")
        self.line, self.col = line, col


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def default_seed():
    raw = os.environ.get("TQLAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TQLAB_SEED must be an integer, got {raw!r}") from None


def parse_complex(s):
    try:
        return complex(s.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {s!r}") from None


# --------------------------------------------------------------------------
# scenarios


@dataclass
class Scenario:
    command: str
    what: str | None = None
    type: str = "A1"
    node: int = 1
    anchor: str = "a"
    shift: Fraction = Fraction(0)
    N: int = 1
    K: int = DEFAULTS["K"]
    Kv: int = DEFAULTS["Kv"]
    M: int = DEFAULTS["M"]
    seed: int = 0
    q0: complex | None = None
    v0: complex | None = None
    preset: str | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        d["shift"] = f"{self.shift.numerator}/{self.shift.denominator}"
        for k in ("q0", "v0"):
            if d[k] is not None:
                d[k] = [d[k].real, d[k].imag]
        if self.preset == "nontwisted":
            d["v0"] = "q0^2"
        return d


_INT_KEYS = {"node", "N", "K", "Kv", "M", "seed"}
_KEYS = {"command", "what", "type", "node", "anchor", "shift", "N", "K", "Kv", "M", "seed",
         "q0", "v0", "preset", "format"}
_COMMANDS = {"verify", "qchar", "tq", "cartan"}


def _key_line(text, key):
    for n, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.split("=")[0].split(":")[0].strip().lower() == key.lower():
            return n, line.index(stripped) + 1
    return None, None


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario(text)


def parse_scenario(text: str) -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("missing [scenario] section", exc.lineno, 1) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ParseError("malformed line", line, 1) from None
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ParseError(str(exc).splitlines()[0], line) from None
    if not cp.has_section("scenario"):
        raise ParseError("missing [scenario] section")
    extra_sections = [s for s in cp.sections() if s != "scenario"]
    if extra_sections:
        line, _ = _key_line(text, f"[{extra_sections[0]}]")
        raise ParseError(f"unknown section [{extra_sections[0]}]", line)
    raw = dict(cp.items("scenario"))
    for k in raw:
        if k not in _KEYS:
            line, col = _key_line(text, k)
            raise ParseError(f"unknown key {k!r}", line, col)
    if "command" not in raw:
        raise ParseError("missing key 'command'")
    vals: dict = {}
    for k, v in raw.items():
        try:
            if k in _INT_KEYS:
                vals[k] = int(v)
            elif k == "shift":
                vals[k] = Fraction(v)
            elif k in ("q0", "v0"):
                vals[k] = parse_complex(v)
            else:
                vals[k] = v.strip()
        except (ValueError, UsageError):
            line, col = _key_line(text, k)
            raise ParseError(f"bad value for {k!r}: {v!r}", line, col) from None
    sc = Scenario(**vals)
    if sc.command not in _COMMANDS:
        raise ParseError(f"unknown command {sc.command!r}", *_key_line(text, "command"))
    if sc.preset not in (None, "nontwisted"):
        raise ParseError(f"unknown preset {sc.preset!r}", *_key_line(text, "preset"))
    if sc.format not in ("json", "latex", "text"):
        raise ParseError(f"unknown format {sc.format!r}", *_key_line(text, "format"))
    for k in ("K", "Kv", "M"):
        if getattr(sc, k) < 1:
            raise ParseError(f"{k} must be positive", *_key_line(text, k))
    return sc


# --------------------------------------------------------------------------
# commands


def _out(args, obj, latex=None, text=None):
    fmt = getattr(args, "format", "json")
    if fmt == "latex" and latex is not None:
        print(latex)
    elif fmt == "text" and text is not None:
        print(text)
    else:
        print(dump(obj))


def cmd_cartan(args):
    cd = parse_type(args.label)
    qc = quantum_cartan(cd)
    obj = {
        "type": cd.label,
        "C": [list(r) for r in cd.C],
        "d": list(cd.d),
        "Cq": [[x.to_json() for x in r] for r in qc.Cq],
        "Cq_inv": [[x.to_json() for x in r] for r in qc.Cq_inv],
    }

    def mat(rows):
        body = " \\\\ ".join(" & ".join(x.latex() for x in r) for r in rows)
        return "\\begin{pmatrix}" + body + "\\end{pmatrix}"

    latex = "\n".join([
        "C = \\begin{pmatrix}" + " \\\\ ".join(" & ".join(str(x) for x in r) for r in cd.C) + "\\end{pmatrix}",
        "d = (" + ", ".join(map(str, cd.d)) + ")",
        "C(q) = " + mat(qc.Cq),
        "\\tilde C(q) = " + mat(qc.Cq_inv),
    ])
    _out(args, obj, latex, latex)
    return 0


def _chi(args):
    cd = parse_type(args.type)
    return cd, fm_fundamental(cd, args.node, point(args.shift, args.anchor))


def cmd_qchar(args):
    cd, chi = _chi(args)
    _out(args, chi.to_json(), chi.latex(), chi.latex())
    return 0


def cmd_tq(args):
    cd, chi = _chi(args)
    rel = tq_relation(cd, chi)
    if args.flavor == "R+":
        rel = dualize(rel, "swap")
    elif args.flavor == "L-":
        rel = dualize(dualize(rel, "swap"), "dual")
    elif args.flavor == "R-":
        rel = dualize(rel, "dual")
    _out(args, rel.to_json(), rel.latex(), rel.latex())
    return 0


def _target(args, cd):
    try:
        m = parse_monomial_latex(args.target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return TargetModuleData(cd, m)


def cmd_spectra(args):
    cd = parse_type(args.type)
    data = _target(args, cd)
    if args.what == "fseries":
        s = f_series(cd, data, args.node, args.K)
        obj = {"node": args.node, "K": args.K, "coefficients": [c.to_json() for c in s.coeffs]}
        latex = " + ".join(f"({c.latex()})z^{{{k}}}" for k, c in enumerate(s.coeffs) if not c.is_zero())
        _out(args, obj, latex, latex)
        return 0
    chi = fm_fundamental(cd, args.node, point(args.shift, "1"))
    if args.what == "template":
        lam = [int(x) for x in args.lam.split(",")] if args.lam else list(data.omega)
        tmpl = eigenvalue_template(cd, chi, data, lam, args.K)
        _out(args, tmpl.to_json(), tmpl.latex(), tmpl.latex())
        return 0
    top, wit = template_witnesses(cd, chi)
    rows = []
    for m in sorted(chi.terms):
        fr = f_ratio_rational(cd, wit[m], data)
        rows.append({
            "monomial": m.latex(),
            "scalar": fr.scalar.to_json(),
            "v_exp": list(fr.v_exp),
            "num": [c.to_json() for c in fr.ratfunc.num.coeffs],
            "den": [c.to_json() for c in fr.ratfunc.den.coeffs],
        })
    latex = "\n".join(f"{m.latex()}: {f_ratio_rational(cd, wit[m], data).ratfunc.latex()}"
                      for m in sorted(chi.terms))
    _out(args, {"top": top.latex(), "ratios": rows}, latex, latex)
    return 0


def _sl2_bethe(args):
    cd = parse_type("A1")
    R = args.R or [1]
    b = args.b or [-1] * len(R)
    if len(b) != len(R):
        raise UsageError("--b must be given once per --R")
    if args.N is not None and args.N != len(R):
        raise UsageError(f"--N {args.N} does not match {len(R)} KR factors")
    return bethe_system(cd, sl2_kr_zeros(list(zip(b, R))), [args.m])


def _bethe_system(args):
    if args.sl2:
        return _sl2_bethe(args)
    cd = parse_type(args.type)
    data = _target(args, cd)
    counts = [int(x) for x in args.counts.split(",")]
    return bethe_system(cd, data, counts)


def cmd_bethe(args):
    sys_ = _bethe_system(args)
    if args.what == "gen":
        obj = sys_.to_json()
        if sys_.size == 1:
            w = solve_closed_single(sys_)
            obj["closed_root"] = {"latex": w.latex(), "exact": w.to_json()}
        _out(args, obj, sys_.latex(), sys_.latex())
        return 0
    seed = args.seed if args.seed is not None else default_seed()
    q0 = parse_complex(args.q0) if args.q0 else NumScalar.random(seed).q0
    if args.preset == "nontwisted":
        v0 = q0 * q0
    elif args.v0:
        v0 = parse_complex(args.v0)
    else:
        raise UsageError("bethe solve needs --v0 or --preset nontwisted")
    try:
        sols = solve_numeric(sys_, q0, v0, seeds=args.seeds)
    except NoConvergence as exc:
        print(dump({"status": "fail", "best_residual": exc.best_residual}))
        return 1
    obj = {
        "q0": [q0.real, q0.imag],
        "v0": [v0.real, v0.imag],
        "preset": args.preset,
        "seed": seed,
        "solutions": [s.to_json() for s in sols],
    }
    _out(args, obj)
    return 0 if sols else 1


def _verify_sl2(what, N, Kv, seed, q0=None):
    rec = checks.Recorder()
    if what == "transfer":
        checks.check_baxter_polynomial(rec, Kv=max(Kv, 4 * N + 1))
        ok = True
        try:
            from .sl2lab import transfer_sl2

            R = transfer_sl2(N, max(Kv, 4 * N + 1))
            R.reconstruct()
        except ArithmeticError:
            ok = False
        rec.add(f"transfer.reconstruct.N{N}", "sl2:rational-in-v", ok)
    elif what == "ti":
        checks.check_ti_polynomial(rec)
    elif what == "baxter":
        err = checks.baxter_residual(N, seed, q0=q0)
        rec.add(f"baxter.tq.N{N}", "sl2:tq-numeric", err < 1e-9, 1e-9, err)
        err = checks.spectra_consistency(N, seed, q0=q0)
        rec.add(f"spectra.template-vs-trace.N{N}", "spectra:end-to-end", err < 1e-9, 1e-9, err)
    elif what == "degree":
        checks.check_degree_law(rec, Nmax=N, Kv=Kv)
    return rec


def cmd_verify(args):
    seed = args.seed if args.seed is not None else default_seed()
    if args.target == "all":
        rec = checks.run_suites(args.suite or None, seed=seed, timing=args.timing)
    else:
        if not args.what:
            raise UsageError("verify sl2 needs --what")
        q0 = parse_complex(args.q0) if args.q0 else None
        rec = _verify_sl2(args.what, args.N, args.Kv, seed, q0)
    print(dump({"seed": seed, "checks": rec.records, "status": "pass" if rec.ok else "fail"}))
    return 0 if rec.ok else 1


def cmd_scenario(args):
    sc = load_scenario(args.path)
    ns = argparse.Namespace(format=sc.format)
    if sc.command == "verify":
        if sc.what in (None, "all"):
            rec = checks.run_suites(seed=sc.seed)
        else:
            if sc.what not in ("transfer", "ti", "baxter", "degree"):
                raise UsageError(f"unknown check {sc.what!r}")
            rec = _verify_sl2(sc.what, sc.N, sc.Kv, sc.seed, sc.q0)
        print(dump({"scenario": sc.to_json(), "checks": rec.records, "status": "pass" if rec.ok else "fail"}))
        return 0 if rec.ok else 1
    if sc.command == "cartan":
        ns.label = sc.type
        return cmd_cartan(ns)
    ns.type, ns.node, ns.anchor, ns.shift, ns.flavor = sc.type, sc.node, sc.anchor, sc.shift, "L+"
    return cmd_qchar(ns) if sc.command == "qchar" else cmd_tq(ns)


# --------------------------------------------------------------------------


def _fmt(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json")
    g.add_argument("--latex", dest="format", action="store_const", const="latex")
    g.add_argument("--text", dest="format", action="store_const", const="text")
    p.set_defaults(format="json")


def _rep_args(p, type_default="A1"):
    p.add_argument("--type", default=type_default)
    p.add_argument("--node", type=int, default=1)
    p.add_argument("--anchor", default="a")
    p.add_argument("--shift", type=Fraction, default=Fraction(0))


def build_parser():
    ap = argparse.ArgumentParser(prog="tqlab", description="TQ relations, q-characters and Bethe equations.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("cartan", help="Cartan data and quantum Cartan matrices")
    p.add_argument("action", choices=["show"])
    p.add_argument("label", help="type and rank, e.g. B2")
    _fmt(p)
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("qchar", help="q-character of a fundamental module")
    _rep_args(p)
    _fmt(p)
    p.set_defaults(func=cmd_qchar)

    p = sub.add_parser("tq", help="Baxter TQ relation for a fundamental module")
    _rep_args(p)
    p.add_argument("--flavor", choices=["L+", "R+", "L-", "R-"], default="L+")
    _fmt(p)
    p.set_defaults(func=cmd_tq)

    p = sub.add_parser("spectra", help="eigenvalue templates and universal factors")
    p.add_argument("what", choices=["template", "fratio", "fseries"])
    p.add_argument("--type", default="A1")
    p.add_argument("--node", type=int, default=1)
    p.add_argument("--shift", type=Fraction, default=Fraction(0), help="q-shift of the auxiliary module")
    p.add_argument("--target", required=True, help="highest monomial of W, e.g. 'Y_{1,q^{-1}}'")
    p.add_argument("--lam", help="weight lambda as comma-separated coordinates")
    p.add_argument("--K", type=int, default=DEFAULTS["K"])
    _fmt(p)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("bethe", help="generate or solve Bethe equations")
    p.add_argument("what", choices=["gen", "solve"])
    p.add_argument("--sl2", action="store_true", help="sl2 chain of KR modules")
    p.add_argument("--N", type=int, help="number of KR factors (sl2)")
    p.add_argument("--R", type=int, action="append", help="KR length, once per factor (sl2)")
    p.add_argument("--b", type=int, action="append", help="q-shift of b_j, once per factor (sl2)")
    p.add_argument("--m", type=int, default=1, help="number of Bethe roots (sl2)")
    p.add_argument("--type", default="A1")
    p.add_argument("--target", help="highest monomial of W")
    p.add_argument("--counts", default="1", help="roots per node, comma-separated")
    p.add_argument("--q0")
    p.add_argument("--v0")
    p.add_argument("--preset", choices=["nontwisted"])
    p.add_argument("--seeds", type=int, default=8)
    p.add_argument("--seed", type=int)
    _fmt(p)
    p.set_defaults(func=cmd_bethe)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("target", choices=["sl2", "all"])
    p.add_argument("--what", choices=["transfer", "ti", "baxter", "degree"])
    p.add_argument("--suite", action="append", choices=sorted(checks.SUITES))
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--Kv", type=int, default=DEFAULTS["Kv"])
    p.add_argument("--q0")
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte reproducibility)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scenario", help="run a scenario file")
    p.add_argument("action", choices=["run"])
    p.add_argument("path")
    p.set_defaults(func=cmd_scenario)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.cmd == "bethe" and not args.sl2 and args.target is None:
        ap.error("bethe needs --sl2 or --target")
    try:
        return args.func(args)
    except (UsageError, InvalidType, UnsupportedType, ValueError, OSError) as exc:
        print(f"tqlab: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"tqlab: budget exceeded: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
