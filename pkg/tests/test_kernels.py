import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from tqlab import _kernels_py as py

cy = pytest.importorskip("tqlab._kernels")

ints = st.integers(min_value=-(2**70), max_value=2**70)
polys = st.lists(ints, max_size=8).map(py.trim)
small = st.lists(st.integers(-20, 20), min_size=1, max_size=5).map(py.trim).filter(bool)


@given(polys, polys)
def test_ring_ops_agree(a, b):
    for name in ("add", "sub", "mul"):
        assert getattr(cy, name)(a, b) == getattr(py, name)(a, b)


@given(polys, small)
def test_divexact_agrees(a, b):
    prod = py.mul(a, b)
    assert cy.divexact(prod, b) == py.divexact(prod, b) == a


@given(small, small, small)
def test_gcd_agrees_and_divides(g, a, b):
    f1, f2 = py.mul(g, a), py.mul(g, b)
    h1, h2 = cy.gcd(f1, f2), py.gcd(f1, f2)
    assert h1 == h2
    assert py.divexact(f1, h1) is not None
    assert py.divexact(h1, py.primitive(g)) is not None


@given(polys, ints)
def test_content_primitive_scale(a, c):
    assert cy.content(a) == py.content(a)
    assert cy.primitive(a) == py.primitive(a)
    assert cy.scale(a, c) == py.scale(a, c)


@given(st.lists(st.integers(-50, 50), max_size=6))
def test_eval_complex_agrees(a):
    x = complex(0.7, -0.4)
    assert abs(cy.eval_complex(a, x) - py.eval_complex(a, x)) < 1e-9


def test_env_switch_selects_fallback():
    code = "from tqlab import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, TQLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["TQLAB_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == cy.BACKEND


def test_end_to_end_identical_across_backends():
    code = ("import json; from tqlab.checks import run_suites; "
            "print(json.dumps(run_suites(['baxter-polynomial', 'degree']).records, sort_keys=True))")
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, TQLAB_PURE_PYTHON=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert outs[0] == outs[1]
    assert '"fail"' not in outs[0]
