"""Convenience layer over the rational matrix kernels."""

from __future__ import annotations

from fractions import Fraction

from heckewb import kernels

_ZERO = Fraction(0)
_ONE = Fraction(1)


def zeros(n: int, m: int):
    return [[_ZERO] * m for _ in range(n)]


def identity(n: int):
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def scalar_mat(c: Fraction, n: int):
    c = Fraction(c)
    return [[c if i == j else _ZERO for j in range(n)] for i in range(n)]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    c = Fraction(c)
    return [[a * c for a in row] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_eq(A, B) -> bool:
    return all(ra == rb for ra, rb in zip(A, B)) and len(A) == len(B)


def is_zero_mat(A) -> bool:
    return all(not a for row in A for a in row)


def trace(A) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), _ZERO)


def mat_pow(A, k: int):
    n = len(A)
    if k < 0:
        return mat_pow(kernels.mat_inv(A), -k)
    out = identity(n)
    base = A
    while k:
        if k & 1:
            out = kernels.mat_mul(out, base)
        base = kernels.mat_mul(base, base)
        k >>= 1
    return out


def rank(A) -> int:
    if not A:
        return 0
    return len(kernels.rref(A)[0])


def flatten(A):
    return [x for row in A for x in row]


def nullspace_fast(A):
    """Right kernel basis via the incremental span (fast on integer rows).

    The span rows are echelon (zero before their own pivot), so the kernel
    comes from back-substitution over descending pivots.
    """
    if not A:
        return []
    width = len(A[0])
    sp = SpanBuilder(width)
    for row in A:
        sp.insert(row)
    rows = sp.int_rows
    pivots = sp.pivots
    order = sorted(range(len(pivots)), key=lambda t: -pivots[t])
    pivot_set = set(pivots)
    free = [c for c in range(width) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [_ZERO] * width
        v[fc] = _ONE
        for t in order:
            c = pivots[t]
            row = rows[t]
            s = _ZERO
            for j in range(c + 1, width):
                if row[j] and v[j]:
                    s += row[j] * v[j]
            if s:
                v[c] = -s / row[c]
        basis.append(v)
    return basis


def int_primitive(vec):
    """Divide an integer vector by its content."""
    import math

    g = 0
    for x in vec:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return list(vec)
    if g == 0:
        return list(vec)
    return [x // g for x in vec]


def primitive(vec):
    """Rescale a rational vector to a primitive integer vector.

    Span computations are scale-invariant; keeping inputs primitive caps
    coefficient growth in the echelon forms.
    """
    import math

    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    num = 0
    for x in vec:
        num = math.gcd(num, x.numerator * (den // x.denominator))
    if num == 0:
        return [Fraction(0)] * len(vec)
    return [Fraction(x.numerator * (den // x.denominator) // num) for x in vec]


class SpanBuilder:
    """Incremental row space (kernel-backed, echelon with immutable rows).

    insert() returns True when the vector enlarged the span; express() gives
    coordinates wrt the stored rows, coords_in_original() wrt the vectors
    as inserted.
    """

    def __init__(self, width: int):
        self.width = width
        self._span = kernels.Span(width)
        self._orig = []

    @property
    def dim(self) -> int:
        return self._span.dim

    @property
    def pivots(self):
        return list(self._span.pivots)

    @property
    def rows(self):
        """Stored rows normalized to leading 1 (echelon, not full rref)."""
        return self._span.rows()

    @property
    def int_rows(self):
        return self._span.int_rows()

    def residual(self, vec):
        return self._span.residual(vec)

    def contains(self, vec) -> bool:
        return self._span.contains(vec)

    def insert(self, vec) -> bool:
        new = self._span.insert(vec)
        if new:
            self._orig.append(list(vec))
        return new

    def insert_residual(self, vec):
        res = self._span.insert_residual(vec)
        if res is not None:
            self._orig.append(list(vec))
        return res

    def express(self, vec):
        """Coefficients wrt the stored rows, or None if not in the span."""
        return self._span.express(vec)

    def coords_in_original(self, vec):
        """Coordinates of vec in terms of the inserted original vectors."""
        cols = transpose(self._orig)
        return solve(cols, vec)


def solve(A, b):
    """One exact solution x of A x = b, or None when inconsistent.

    Free variables are set to zero.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    rows, pivots = kernels.rref(aug)
    x = [_ZERO] * m
    for row, c in zip(rows, pivots):
        if c == m:
            return None  # pivot in the rhs column: inconsistent
        x[c] = row[m]
    # verify (guards against free-variable interactions)
    check = kernels.mat_vec(A, x)
    if check != list(b):
        return None
    return x
