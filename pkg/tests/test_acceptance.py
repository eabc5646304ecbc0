"""Acceptance criteria 1-10, each reported on one line."""

import json
import time

import pytest

from tqlab import checks


@pytest.fixture
def report(capsys):
    def emit(n, title, rec_or_ok, extra=""):
        ok = rec_or_ok if isinstance(rec_or_ok, bool) else rec_or_ok.ok
        failed = [] if isinstance(rec_or_ok, bool) else [r["check_id"] for r in rec_or_ok.records if r["status"] != "pass"]
        with capsys.disabled():
            line = f"criterion {n:>2} {title:<34} {'PASS' if ok else 'FAIL'}"
            print("\n" + line + (f"  {extra}" if extra else "") + (f"  failed: {failed}" if failed else ""))
        return ok

    return emit


def run(fn, **kw):
    rec = checks.Recorder()
    fn(rec, **kw)
    return rec


def test_criterion_01_tq_relations(report):
    rec = run(checks.check_relations)
    assert len(rec.records) == 6
    assert report(1, "TQ relations (exact)", rec)


def test_criterion_02_qcharacters(report):
    rec = run(checks.check_qcharacters, kmax=6)
    assert len(rec.records) == 3 + 7
    assert report(2, "q-characters (exact)", rec)


def test_criterion_03_bethe_closed_form(report):
    rec = run(checks.check_bethe_closed)
    assert report(3, "Bethe closed form (exact)", rec)


def test_criterion_04_baxter_polynomial(report):
    t = time.perf_counter()
    rec = run(checks.check_baxter_polynomial)
    elapsed = time.perf_counter() - t
    assert report(4, "Baxter polynomial N=1 (exact)", rec.ok and elapsed < 5, f"{elapsed:.2f}s")


def test_criterion_05_degree_law(report):
    rec = run(checks.check_degree_law, Nmax=4)
    assert len(rec.records) == 5
    assert report(5, "degree law N<=4 (exact)", rec)


def test_criterion_06_polynomiality(report):
    rec = run(checks.check_ti_polynomial, K=10)
    assert report(6, "T_i polynomiality K=10 (exact)", rec)


def test_criterion_07_telescoping(report):
    rec = run(checks.check_telescoping, K=12)
    assert len(rec.records) == 4
    assert report(7, "telescoping order 12 (exact)", rec)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_criterion_08_spectra_consistency(report, seed):
    rec = run(checks.check_spectra, seed=seed, Nmax=3)
    run_b = run(checks.check_baxter_numeric, seed=seed, Nmax=3)
    rec.records += run_b.records
    worst = max(r["residual"] for r in rec.records if r["check_id"] != "spectra.residue.perturbed")
    perturbed = next(r["residual"] for r in rec.records if r["check_id"] == "spectra.residue.perturbed")
    assert report(8, f"spectra end-to-end seed={seed} (1e-9)", rec, f"max {worst:.1e}, perturbed {perturbed:.1e}")


def test_criterion_09_invariants(report):
    rec = run(checks.check_invariants, seed=0)
    assert report(9, "structural invariants (exact)", rec, f"{len(rec.records)} checks")


def test_criterion_10_determinism(report):
    a = json.dumps(checks.run_suites(seed=3).records, sort_keys=True)
    b = json.dumps(checks.run_suites(seed=3).records, sort_keys=True)
    assert report(10, "byte-identical reports", a == b, f"{len(a)} bytes")
