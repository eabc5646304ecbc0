"""Dense integer polynomial kernels, pure Python version.

A polynomial is a list of Python ints, lowest degree first, with no
trailing zeros.  The zero polynomial is ``[]``.  Functions never mutate
their arguments.  The compiled module ``_kernels`` exposes the same names.
"""

from math import gcd as igcd, isqrt

BACKEND = "python"


def trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n]


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i in range(len(b)):
        r[i] += b[i]
    return trim(r)


def sub(a, b):
    la, lb = len(a), len(b)
    if la >= lb:
        r = list(a)
        for i in range(lb):
            r[i] -= b[i]
    else:
        r = [-c for c in b]
        for i in range(la):
            r[i] += a[i]
    return trim(r)


def mul(a, b):
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    la = len(a)
    r = [0] * (la + len(b) - 1)
    for j in range(len(b)):
        bj = b[j]
        if bj:
            for i in range(la):
                r[i + j] += a[i] * bj
    return r


def scale(a, c):
    if not c:
        return []
    return [x * c for x in a]


def content(a):
    g = 0
    for c in a:
        g = igcd(g, c)
        if g == 1:
            break
    return g


def divexact(a, b):
    """Return a/b if b divides a in Z[t], otherwise None."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None
    lb = b[db]
    r = list(a)
    q = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = r[k + db]
        if c:
            qk, rem = divmod(c, lb)
            if rem:
                return None
            q[k] = qk
            for i in range(db + 1):
                r[k + i] -= qk * b[i]
    for k in range(db):
        if r[k]:
            return None
    return q


def primitive(a):
    """Primitive part with positive leading coefficient."""
    if not a:
        return []
    c = content(a)
    if a[-1] < 0:
        c = -c
    if c == 1:
        return list(a)
    return [x // c for x in a]


def evaluate_int(a, x):
    r = 0
    for i in range(len(a) - 1, -1, -1):
        r = r * x + a[i]
    return r


def _interpolate(h, x):
    f = []
    half = x // 2
    while h:
        g = h % x
        if g > half:
            g -= x
        f.append(g)
        h = (h - g) // x
    return trim(f)


def _heugcd(f, g):
    fn = max(abs(c) for c in f)
    gn = max(abs(c) for c in g)
    x = 2 * min(fn, gn) + 29
    for _ in range(6):
        ff = evaluate_int(f, x)
        gg = evaluate_int(g, x)
        if ff and gg:
            h = igcd(ff, gg)
            cand = primitive(_interpolate(h, x))
            if cand and divexact(f, cand) is not None and divexact(g, cand) is not None:
                return cand
            cf = primitive(_interpolate(ff // h, x))
            if cf:
                hf = divexact(f, cf)
                if hf is not None:
                    hf = primitive(hf)
                    if divexact(g, hf) is not None:
                        return hf
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _prem(a, b):
    db = len(b) - 1
    lb = b[db]
    r = list(a)
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i in range(db + 1):
            r[shift + i] -= c * b[i]
        r = trim(r)
    return r


def _prs_gcd(a, b):
    a = primitive(a)
    b = primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def gcd(a, b):
    """Primitive gcd in Z[t] with positive leading coefficient."""
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    if len(a) == 1 or len(b) == 1:
        return [1]
    if a == b:
        return primitive(a)
    pa, pb = primitive(a), primitive(b)
    h = _heugcd(pa, pb)
    if h is None:
        h = _prs_gcd(pa, pb)
    return h


def eval_complex(a, x):
    r = 0j
    for i in range(len(a) - 1, -1, -1):
        r = r * x + a[i]
    return r
