# cython: language_level=3, boundscheck=False, wraparound=False
"""Dense integer polynomial kernels, compiled version.

Same contract as ``_kernels_py``: lists of Python ints, lowest degree
first, no trailing zeros.  Coefficients stay arbitrary precision; the win
comes from typed loop indices and list access without interpreter dispatch.
"""

from math import gcd as igcd, isqrt

BACKEND = "cython"


cpdef list trim(list a):
    cdef Py_ssize_t n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n]


cpdef list add(list a, list b):
    cdef Py_ssize_t i
    if len(a) < len(b):
        a, b = b, a
    cdef list r = list(a)
    for i in range(len(b)):
        r[i] = r[i] + b[i]
    return trim(r)


cpdef list sub(list a, list b):
    cdef Py_ssize_t i, la = len(a), lb = len(b)
    cdef list r
    if la >= lb:
        r = list(a)
        for i in range(lb):
            r[i] = r[i] - b[i]
    else:
        r = [-c for c in b]
        for i in range(la):
            r[i] = r[i] + a[i]
    return trim(r)


cpdef list mul(list a, list b):
    cdef Py_ssize_t i, j, la, lb
    cdef object bj
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    la = len(a)
    lb = len(b)
    cdef list r = [0] * (la + lb - 1)
    for j in range(lb):
        bj = b[j]
        if bj:
            for i in range(la):
                r[i + j] = r[i + j] + a[i] * bj
    return r


cpdef list scale(list a, object c):
    if not c:
        return []
    return [x * c for x in a]


cpdef object content(list a):
    cdef object g = 0
    for c in a:
        g = igcd(g, c)
        if g == 1:
            break
    return g


cpdef object divexact(list a, list b):
    cdef Py_ssize_t da, db, k, i
    cdef object lb, c, qk, rem
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    da = len(a) - 1
    db = len(b) - 1
    if da < db:
        return None
    lb = b[db]
    cdef list r = list(a)
    cdef list q = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = r[k + db]
        if c:
            qk, rem = divmod(c, lb)
            if rem:
                return None
            q[k] = qk
            for i in range(db + 1):
                r[k + i] = r[k + i] - qk * b[i]
    for k in range(db):
        if r[k]:
            return None
    return q


cpdef list primitive(list a):
    if not a:
        return []
    cdef object c = content(a)
    if a[len(a) - 1] < 0:
        c = -c
    if c == 1:
        return list(a)
    return [x // c for x in a]


cpdef object evaluate_int(list a, object x):
    cdef Py_ssize_t i
    cdef object r = 0
    for i in range(len(a) - 1, -1, -1):
        r = r * x + a[i]
    return r


cdef list _interpolate(object h, object x):
    cdef list f = []
    cdef object g
    cdef object half = x // 2
    while h:
        g = h % x
        if g > half:
            g = g - x
        f.append(g)
        h = (h - g) // x
    return trim(f)


cdef object _heugcd(list f, list g):
    cdef object fn = max([abs(c) for c in f])
    cdef object gn = max([abs(c) for c in g])
    cdef object x = 2 * min(fn, gn) + 29
    cdef object ff, gg, h, hf
    cdef list cand, cf
    cdef int it
    for it in range(6):
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


cdef list _prem(list a, list b):
    cdef Py_ssize_t db = len(b) - 1, shift, i
    cdef object lb = b[db], c
    cdef list r = list(a)
    while r and len(r) - 1 >= db:
        c = r[len(r) - 1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i in range(db + 1):
            r[shift + i] = r[shift + i] - c * b[i]
        r = trim(r)
    return r


cdef list _prs_gcd(list a, list b):
    a = primitive(a)
    b = primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, primitive(_prem(a, b))
    return primitive(a)


cpdef list gcd(list a, list b):
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    if len(a) == 1 or len(b) == 1:
        return [1]
    if a == b:
        return primitive(a)
    cdef list pa = primitive(a)
    cdef list pb = primitive(b)
    h = _heugcd(pa, pb)
    if h is None:
        h = _prs_gcd(pa, pb)
    return h


cpdef complex eval_complex(list a, complex x):
    cdef Py_ssize_t i
    cdef complex r = 0j
    for i in range(len(a) - 1, -1, -1):
        r = r * x + <double>a[i]
    return r
