"""Pure-Python exact rational matrix kernels.

Matrices are lists of rows of Fractions.  The compiled twin in
``_ckernels.pyx`` implements the same functions on (numerator, denominator)
integer pairs; ``heckewb.kernels`` picks whichever is available.
"""

from __future__ import annotations

from fractions import Fraction

BACKEND = "pure"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mat_mul(A, B):
    n = len(A)
    k = len(B)
    m = len(B[0]) if k else 0
    out = [[_ZERO] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    b = Bt[j]
                    if b:
                        Oi[j] += a * b
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = _ZERO
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s)
    return out


def trace_mul(A, B):
    """tr(A @ B) without forming the product."""
    s = _ZERO
    for i in range(len(A)):
        Ai = A[i]
        for k in range(len(B)):
            a = Ai[k]
            if a:
                b = B[k][i]
                if b:
                    s += a * b
    return s


def rref(A):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Zero rows are dropped; pivots are scaled to 1 and cleared above and
    below, so the rows are a canonical basis of the row space.
    """
    rows = [list(r) for r in A]
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _ONE / rows[r][c]
        if inv != 1:
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri, rr = rows[i], rows[r]
                for j in range(c, n_cols):
                    if rr[j]:
                        ri[j] -= f * rr[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def reduce_vector(vec, rows, pivots):
    """Reduce vec against rref rows (leading 1 at each pivot column)."""
    v = list(vec)
    for row, c in zip(rows, pivots):
        f = v[c]
        if f:
            for j in range(c, len(v)):
                if row[j]:
                    v[j] -= f * row[j]
    return v


def nullspace(A):
    """Basis of the right kernel of A (list of column vectors)."""
    if not A:
        return []
    rows, pivots = rref(A)
    n_cols = len(A[0])
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [_ZERO] * n_cols
        v[fc] = _ONE
        for row, pc in zip(rows, pivots):
            if row[fc]:
                v[pc] = -row[fc]
        basis.append(v)
    return basis


def mat_inv(A):
    """Inverse of a square matrix; raises ZeroDivisionError when singular."""
    n = len(A)
    aug = [list(A[i]) + [_ONE if j == i else _ZERO for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in rows]


def int_mat_mul(A, B):
    """Exact product of integer matrices."""
    n = len(A)
    k = len(B)
    m = len(B[0]) if k else 0
    out = []
    for i in range(n):
        row = [0] * m
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    b = Bt[j]
                    if b:
                        row[j] += a * b
        out.append(row)
    return out


def int_gram(flats, d):
    """Trace-form Gram matrix of flattened d x d integer matrices."""
    k = len(flats)
    out = []
    for i in range(k):
        row = []
        fi = flats[i]
        for j in range(k):
            fj = flats[j]
            s = 0
            for a in range(d):
                base = a * d
                for b in range(d):
                    x = fi[base + b]
                    if x:
                        y = fj[b * d + a]
                        if y:
                            s += x * y
            row.append(s)
        out.append(row)
    return out


def _vec_to_int(vec):
    """Scale a rational vector to integers by the common denominator."""
    from math import gcd

    L = 1
    fs = [Fraction(x) for x in vec]
    for x in fs:
        d = x.denominator
        if d != 1:
            L = L * d // gcd(L, d)
    return [x.numerator * (L // x.denominator) for x in fs]


def _int_normalize(v):
    from math import gcd

    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g == 0:
        return
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    if g != 1:
        for j, x in enumerate(v):
            if x:
                v[j] = x // g


class Span:
    """Incremental row space over Q with immutable stored rows.

    Mirrors the compiled twin: primitive integer rows, zero before their own
    pivot, reduce-until-stable with Bareiss single-step divisions.
    """

    def __init__(self, width: int):
        self.width = width
        self._rows = []
        self.pivots = []
        self._pivmap = {}

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def np_rows(self) -> int:
        return 0

    def _reduce_int(self, vec):
        v = _vec_to_int(vec)
        prev = 1
        c = 0
        while True:
            while c < self.width and v[c] == 0:
                c += 1
            if c == self.width or c not in self._pivmap:
                return v
            row = self._rows[self._pivmap[c]]
            a = v[c]
            p = row[c]
            for j in range(c, self.width):
                rj = row[j]
                v[j] = v[j] * p - rj * a if rj else v[j] * p
            ap = abs(prev)
            if ap > 1 and all(x % ap == 0 for x in v):
                for j in range(self.width):
                    v[j] //= ap
            else:
                _int_normalize(v)
            prev = p

    def residual(self, vec):
        return [Fraction(x) for x in self._reduce_int(vec)]

    def contains(self, vec) -> bool:
        return not any(self._reduce_int(vec))

    def insert(self, vec) -> bool:
        return self.insert_residual(vec) is not None

    def insert_residual(self, vec):
        v = self._reduce_int(vec)
        _int_normalize(v)
        piv = None
        for c, x in enumerate(v):
            if x:
                piv = c
                break
        if piv is None:
            return None
        self._pivmap[piv] = len(self.pivots)
        self._rows.append(v)
        self.pivots.append(piv)
        return list(v)

    def express(self, vec):
        """Coefficients of vec wrt the stored rows; None when not in span."""
        v = [Fraction(x) for x in vec]
        coeffs = [_ZERO] * len(self.pivots)
        c = 0
        while True:
            while c < self.width and not v[c]:
                c += 1
            if c == self.width:
                return coeffs
            if c not in self._pivmap:
                return None
            t = self._pivmap[c]
            row = self._rows[t]
            f = v[c] / row[c]
            coeffs[t] = f
            for j in range(c, self.width):
                if row[j]:
                    v[j] -= f * row[j]

    def coords(self, vec):
        return self.express(vec)

    def rows(self):
        """The stored rows as Fractions, scaled to leading coefficient 1."""
        return [
            [Fraction(x, row[c]) for x in row]
            for row, c in zip(self._rows, self.pivots)
        ]

    def int_rows(self):
        return [list(r) for r in self._rows]
