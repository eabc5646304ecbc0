"""Finite-type Cartan data and quantum Cartan matrices.

Conventions: ``C[i][j] = <alpha_i^vee, alpha_j>`` with Kac's node numbering,
so the simple root alpha_i has fundamental-weight coordinates given by the
i-th column of C.  Nodes are 1-based in the public API and 0-based inside
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import QRat, qint


class InvalidType(ValueError):
    pass


class NotInRootCone(ValueError):
    pass


class WeightVector(tuple):
    """Coordinates in the fundamental-weight basis (ints or Fractions)."""

    def __new__(cls, coords):
        return super().__new__(cls, tuple(coords))

    @classmethod
    def zero(cls, n):
        return cls([0] * n)

    @classmethod
    def fundamental(cls, n, i):
        return cls([1 if k == i - 1 else 0 for k in range(n)])

    def __add__(self, other):
        return WeightVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return WeightVector(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return WeightVector(-a for a in self)

    def __mul__(self, k):
        return WeightVector(a * k for a in self)

    __rmul__ = __mul__

    def is_zero(self):
        return all(a == 0 for a in self)

    def __repr__(self):
        return f"WeightVector({list(self)})"


def _chain(n, edges):
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        C[i - 1][j - 1] = -1
        C[j - 1][i - 1] = -1
    return C


def _cartan_matrix(typ, n):
    if typ == "A" and n >= 1:
        return _chain(n, [(i, i + 1) for i in range(1, n)]), [1] * n
    if typ == "B" and n >= 2:
        C = _chain(n, [(i, i + 1) for i in range(1, n)])
        C[n - 1][n - 2] = -2
        return C, [2] * (n - 1) + [1]
    if typ == "C" and n >= 2:
        C = _chain(n, [(i, i + 1) for i in range(1, n)])
        C[n - 2][n - 1] = -2
        return C, [1] * (n - 1) + [2]
    if typ == "D" and n >= 4:
        return _chain(n, [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]), [1] * n
    if typ == "E" and n in (6, 7, 8):
        row = n - 1
        branch = {6: 3, 7: 4, 8: 5}[n]
        return _chain(n, [(i, i + 1) for i in range(1, row)] + [(branch, n)]), [1] * n
    if typ == "F" and n == 4:
        C = _chain(4, [(1, 2), (2, 3), (3, 4)])
        C[2][1] = -2
        return C, [2, 2, 1, 1]
    if typ == "G" and n == 2:
        return [[2, -1], [-3, 2]], [3, 1]
    raise InvalidType(f"no finite type {typ}{n}")


_DUAL_COXETER = {
    "A": lambda n: n + 1,
    "B": lambda n: 2 * n - 1,
    "C": lambda n: n + 1,
    "D": lambda n: 2 * n - 2,
    "E": lambda n: {6: 12, 7: 18, 8: 30}[n],
    "F": lambda n: 9,
    "G": lambda n: 4,
}


def _involution(typ, n):
    """Nodes exchanged by -w_0 (1-based)."""
    if typ == "A":
        return {i: n + 1 - i for i in range(1, n + 1)}
    inv = {i: i for i in range(1, n + 1)}
    if typ == "D" and n % 2 == 1:
        inv[n - 1], inv[n] = n, n - 1
    if typ == "E" and n == 6:
        inv.update({1: 5, 5: 1, 2: 4, 4: 2})
    return inv


def _frac_inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class CartanDatum:
    type: str
    rank: int
    C: tuple
    d: tuple
    Cinv: tuple = field(repr=False, compare=False)
    dual_coxeter: int = field(compare=False)
    involution: dict = field(repr=False, compare=False, hash=False)

    @property
    def label(self):
        return f"{self.type}{self.rank}"

    @property
    def nodes(self):
        return range(1, self.rank + 1)

    @property
    def B(self):
        return tuple(tuple(self.d[i] * self.C[i][j] for j in range(self.rank)) for i in range(self.rank))

    @property
    def lacing(self):
        return max(self.d)

    def c(self, i, j):
        """C_{i,j} with 1-based nodes."""
        return self.C[i - 1][j - 1]

    def di(self, i):
        return self.d[i - 1]

    def alpha(self, i):
        """Simple root alpha_i in the fundamental-weight basis (column i of C)."""
        return WeightVector(self.C[j][i - 1] for j in range(self.rank))

    def omega(self, i):
        return WeightVector.fundamental(self.rank, i)

    def zero_weight(self):
        return WeightVector.zero(self.rank)


def build_cartan(typ: str, rank: int) -> CartanDatum:
    typ = typ.upper()
    C, d = _cartan_matrix(typ, rank)
    n = rank
    for i in range(n):
        for j in range(n):
            if d[i] * C[i][j] != d[j] * C[j][i]:
                raise InvalidType("symmetrizer mismatch")
    Cinv = _frac_inverse(C)
    return CartanDatum(
        typ,
        rank,
        tuple(map(tuple, C)),
        tuple(d),
        tuple(map(tuple, Cinv)),
        _DUAL_COXETER[typ](rank),
        _involution(typ, rank),
    )


def parse_type(label: str) -> CartanDatum:
    """'A2' -> build_cartan('A', 2)."""
    label = label.strip()
    if len(label) < 2 or not label[1:].isdigit():
        raise InvalidType(f"bad type label {label!r}")
    return build_cartan(label[0], int(label[1:]))


# --------------------------------------------------------------------------
# quantum Cartan matrices


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = QRat(0)
            for k in range(m):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def bareiss_inverse(M):
    """Inverse of a square QRat matrix by fraction-free (Bareiss) elimination.

    Every row other than the pivot row is updated with the one-step Bareiss
    rule, so intermediate entries stay polynomial in the input entries; the
    left block ends up diagonal and the inverse is read off row by row.
    """
    n = len(M)
    A = [list(M[i]) + [QRat(int(i == j)) for j in range(n)] for i in range(n)]
    prev = QRat(1)
    for k in range(n):
        if not A[k][k]:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                raise ZeroDivisionError("singular matrix")
            A[k], A[swap] = A[swap], A[k]
        for i in range(n):
            if i == k:
                continue
            for j in range(2 * n):
                if j == k:
                    continue
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) / prev
            A[i][k] = QRat(0)
        prev = A[k][k]
    inv = []
    for i in range(n):
        piv = A[i][i]
        inv.append(tuple(A[i][n + j] / piv for j in range(n)))
    return tuple(inv)


@dataclass(frozen=True)
class QuantumCartan:
    Cq: tuple
    Bq: tuple
    Cq_inv: tuple
    Bq_inv: tuple

    def ct(self, i, j):
        """tilde C_{i,j}(q) with 1-based nodes."""
        return self.Cq_inv[i - 1][j - 1]

    def bt(self, i, j):
        return self.Bq_inv[i - 1][j - 1]


def quantum_cartan(cd: CartanDatum) -> QuantumCartan:
    n = cd.rank
    Cq = tuple(
        tuple(qint(2, cd.d[i]) if i == j else qint(cd.C[i][j]) for j in range(n)) for i in range(n)
    )
    Bq = tuple(tuple(qint(cd.d[i]) * Cq[i][j] for j in range(n)) for i in range(n))
    Cinv = bareiss_inverse(Cq)
    Binv = bareiss_inverse(Bq)
    return QuantumCartan(Cq, Bq, Cinv, Binv)


_QC_CACHE: dict = {}


def quantum_cartan_cached(cd: CartanDatum) -> QuantumCartan:
    key = (cd.type, cd.rank)
    if key not in _QC_CACHE:
        _QC_CACHE[key] = quantum_cartan(cd)
    return _QC_CACHE[key]


def ct_at_power(cd: CartanDatum, i: int, j: int, r: int) -> QRat:
    """tilde C_{i,j}(q^r)."""
    return quantum_cartan_cached(cd).ct(i, j).subs_power(r)


def ht_decompose(cd: CartanDatum, omega, lam) -> tuple:
    """Integers ht_i with omega - lam = sum_i ht_i alpha_i."""
    x = [Fraction(a) - Fraction(b) for a, b in zip(omega, lam, strict=True)]
    n = cd.rank
    ht = [sum(cd.Cinv[i][j] * x[j] for j in range(n)) for i in range(n)]
    if any(h.denominator != 1 or h < 0 for h in ht):
        raise NotInRootCone(f"{list(x)} is not in the nonnegative root lattice")
    return tuple(int(h) for h in ht)
