# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact rational matrix kernels.

Same contract as ``pykernels``: matrices cross the boundary as lists of
rows of Fractions; internally everything runs on parallel numerator and
denominator lists of Python ints, which skips the Fraction object overhead
in the inner loops.
"""

from fractions import Fraction
from math import gcd

import numpy as np

try:
    from gmpy2 import mpz as _mpz, gcd as _zgcd
except ImportError:  # pragma: no cover
    _mpz = int
    _zgcd = gcd

BACKEND = "cython"

# int64 fast-path bound: products and sums must stay below 2**63
cdef object _SAFE = 1 << 62

_ZERO = Fraction(0)
_ONE = Fraction(1)


cdef inline void _set_reduced(list rn, list rd, Py_ssize_t j, object num, object den):
    cdef object g
    if num == 0:
        rn[j] = 0
        rd[j] = 1
        return
    if den < 0:
        num = -num
        den = -den
    g = gcd(num, den)
    if g != 1:
        num //= g
        den //= g
    rn[j] = num
    rd[j] = den


cdef tuple _to_pairs(A):
    """Flatten a Fraction matrix into (nums, dens, nrows, ncols)."""
    cdef list nums = []
    cdef list dens = []
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t m = len(A[0]) if n else 0
    for row in A:
        for x in row:
            f = Fraction(x)
            nums.append(f.numerator)
            dens.append(f.denominator)
    return nums, dens, n, m


cdef list _from_pairs(list nums, list dens, Py_ssize_t n, Py_ssize_t m):
    cdef list out = []
    cdef Py_ssize_t i, j
    for i in range(n):
        row = []
        for j in range(m):
            row.append(Fraction(nums[i * m + j], dens[i * m + j]))
        out.append(row)
    return out


def mat_mul(A, B):
    cdef list an, ad, bn, bd
    cdef Py_ssize_t n, k, k2, m, i, t, j
    an, ad, n, k = _to_pairs(A)
    bn, bd, k2, m = _to_pairs(B)
    cdef list on = [0] * (n * m)
    cdef list od = [1] * (n * m)
    cdef object a_n, a_d, b_n, num, den, acc_n, acc_d
    for i in range(n):
        for t in range(k):
            a_n = an[i * k + t]
            if a_n == 0:
                continue
            a_d = ad[i * k + t]
            for j in range(m):
                b_n = bn[t * m + j]
                if b_n == 0:
                    continue
                num = a_n * b_n
                den = a_d * bd[t * m + j]
                acc_n = on[i * m + j]
                if acc_n == 0:
                    on[i * m + j] = num
                    od[i * m + j] = den
                else:
                    acc_d = od[i * m + j]
                    on[i * m + j] = acc_n * den + num * acc_d
                    od[i * m + j] = acc_d * den
    for i in range(n * m):
        _set_reduced(on, od, i, on[i], od[i])
    return _from_pairs(on, od, n, m)


def mat_vec(A, v):
    cdef list an, ad, vn, vd
    cdef Py_ssize_t n, m, i, j
    an, ad, n, m = _to_pairs(A)
    vn = []
    vd = []
    for x in v:
        f = Fraction(x)
        vn.append(f.numerator)
        vd.append(f.denominator)
    out = []
    cdef object acc_n, acc_d, a_n, num, den
    for i in range(n):
        acc_n = 0
        acc_d = 1
        for j in range(m):
            a_n = an[i * m + j]
            if a_n == 0 or vn[j] == 0:
                continue
            num = a_n * vn[j]
            den = ad[i * m + j] * vd[j]
            acc_n, acc_d = acc_n * den + num * acc_d, acc_d * den
        out.append(Fraction(acc_n, acc_d))
    return out


def trace_mul(A, B):
    cdef list an, ad, bn, bd
    cdef Py_ssize_t n, k, k2, m, i, t
    an, ad, n, k = _to_pairs(A)
    bn, bd, k2, m = _to_pairs(B)
    cdef object acc_n = 0
    cdef object acc_d = 1
    cdef object a_n, b_n, num, den
    for i in range(n):
        for t in range(k):
            a_n = an[i * k + t]
            if a_n == 0:
                continue
            b_n = bn[t * m + i]
            if b_n == 0:
                continue
            num = a_n * b_n
            den = ad[i * k + t] * bd[t * m + i]
            acc_n, acc_d = acc_n * den + num * acc_d, acc_d * den
    return Fraction(acc_n, acc_d)


cdef void _eliminate(list rn, list rd, list sn, list sd,
                     object fn, object fd, Py_ssize_t start, Py_ssize_t width):
    """row r -= (fn/fd) * row s on columns [start, width)."""
    cdef Py_ssize_t j
    cdef object b_n, num, den, a_n, a_d
    for j in range(start, width):
        b_n = sn[j]
        if b_n == 0:
            continue
        num = fn * b_n
        den = fd * sd[j]
        a_n = rn[j]
        a_d = rd[j]
        _set_reduced(rn, rd, j, a_n * den - num * a_d, a_d * den)


cdef void _scale_row(list rn, list rd, object fn, object fd, Py_ssize_t width):
    cdef Py_ssize_t j
    for j in range(width):
        if rn[j] != 0:
            _set_reduced(rn, rd, j, rn[j] * fn, rd[j] * fd)


cdef tuple _rref_pairs(list rows_n, list rows_d, Py_ssize_t width):
    """In-place rref on lists of row pair-lists; returns (#rows, pivots)."""
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, nrows = len(rows_n)
    cdef Py_ssize_t piv
    cdef object f_n, f_d
    for c in range(width):
        piv = -1
        for i in range(r, nrows):
            if (<list>rows_n[i])[c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        rows_n[r], rows_n[piv] = rows_n[piv], rows_n[r]
        rows_d[r], rows_d[piv] = rows_d[piv], rows_d[r]
        f_n = (<list>rows_n[r])[c]
        f_d = (<list>rows_d[r])[c]
        if f_n != f_d:
            _scale_row(<list>rows_n[r], <list>rows_d[r], f_d, f_n, width)
        for i in range(nrows):
            if i != r and (<list>rows_n[i])[c] != 0:
                _eliminate(<list>rows_n[i], <list>rows_d[i],
                           <list>rows_n[r], <list>rows_d[r],
                           (<list>rows_n[i])[c], (<list>rows_d[i])[c], c, width)
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivots


def rref(A):
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t m = len(A[0]) if n else 0
    cdef list rows_n = []
    cdef list rows_d = []
    for row in A:
        rn = []
        rd = []
        for x in row:
            f = Fraction(x)
            rn.append(f.numerator)
            rd.append(f.denominator)
        rows_n.append(rn)
        rows_d.append(rd)
    r, pivots = _rref_pairs(rows_n, rows_d, m)
    out = []
    for i in range(r):
        out.append([Fraction((<list>rows_n[i])[j], (<list>rows_d[i])[j]) for j in range(m)])
    return out, pivots


def reduce_vector(vec, rows, pivots):
    cdef list vn = []
    cdef list vd = []
    for x in vec:
        f = Fraction(x)
        vn.append(f.numerator)
        vd.append(f.denominator)
    cdef Py_ssize_t width = len(vn)
    cdef Py_ssize_t c
    cdef object f_n, f_d
    for row, cc in zip(rows, pivots):
        c = cc
        f_n = vn[c]
        if f_n == 0:
            continue
        f_d = vd[c]
        rn = []
        rd = []
        for x in row:
            fr = Fraction(x)
            rn.append(fr.numerator)
            rd.append(fr.denominator)
        _eliminate(vn, vd, rn, rd, f_n, f_d, c, width)
    return [Fraction(vn[j], vd[j]) for j in range(width)]


def nullspace(A):
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
    cdef Py_ssize_t n = len(A)
    aug = [list(A[i]) + [_ONE if j == i else _ZERO for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in rows]


cdef list _vec_to_int(vec, Py_ssize_t width):
    """Scale a rational vector to gmp integers (common denominator)."""
    cdef object L = 1
    cdef list nums = []
    cdef list dens = []
    for x in vec:
        f = Fraction(x)
        nums.append(f.numerator)
        dens.append(f.denominator)
        d = f.denominator
        if d != 1:
            L = L * d // gcd(L, d)
    cdef list out = []
    cdef Py_ssize_t j
    L = _mpz(L)
    for j in range(width):
        out.append(_mpz(nums[j]) * (L // dens[j]))
    return out


cdef void _int_eliminate(list v, list row, object a, object p, Py_ssize_t width):
    """v <- v*p - row*a  (fraction-free elimination step)."""
    cdef Py_ssize_t j
    cdef object rj
    for j in range(width):
        rj = row[j]
        if rj == 0:
            v[j] = v[j] * p
        else:
            v[j] = v[j] * p - rj * a


cdef void _int_normalize(list v, Py_ssize_t width):
    """Divide by the content; leading nonzero becomes positive."""
    cdef object g = 0
    cdef Py_ssize_t j
    for j in range(width):
        if v[j] != 0:
            g = _zgcd(g, v[j])
            if g == 1:
                break
    if g == 0:
        return
    cdef object lead = 0
    for j in range(width):
        if v[j] != 0:
            lead = v[j]
            break
    if lead < 0:
        g = -g
    if g != 1:
        for j in range(width):
            if v[j] != 0:
                v[j] //= g


cdef object _np_normalize(object v):
    """Content-normalize an int64 numpy vector, leading entry positive."""
    nz = v[v != 0]
    if nz.size == 0:
        return v
    g = int(np.gcd.reduce(np.abs(nz)))
    if int(nz[0]) < 0:
        g = -g
    if g != 1:
        v = v // g
    return v


cdef tuple _np_eliminate(object v, object row, object a, object p, object prev):
    """One Bareiss step: v <- (v*p - row*a)/prev when the division is exact
    (it is along an untouched pivot chain), else content-normalized.
    Returns (ok, v); ok False signals an int64 overflow risk."""
    cdef object mv = int(np.abs(v).max()) if v.size else 0
    cdef object mr = int(np.abs(row).max()) if row.size else 0
    if mv * abs(p) + mr * abs(a) >= _SAFE:
        return False, v
    v = v * p - row * a
    if prev != 1 and prev != 0:
        ap = abs(prev)
        if ap > 1 and not np.any(v % ap):
            v = v // ap
            return True, v
    return True, _np_normalize(v)


cdef class Span:
    """Incremental row space over Q with immutable stored rows.

    Every stored row is a primitive integer vector whose entries before its
    own pivot are zero; rows are never modified after insertion.  Reduction
    repeatedly eliminates the current leading entry against the row with
    that pivot (a Bareiss chain), so it terminates within `width` steps and
    the coefficients stay small.  Rows that fit in int64 run vectorized.
    """

    cdef public Py_ssize_t width
    cdef list _rows       # np.int64 arrays or lists of mpz
    cdef list _isnp
    cdef public list pivots   # pivot of _rows[t]
    cdef dict _pivmap     # pivot column -> row index

    def __init__(self, width):
        self.width = width
        self._rows = []
        self._isnp = []
        self.pivots = []
        self._pivmap = {}

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def np_rows(self):
        """Diagnostic: how many rows are on the int64 fast path."""
        return sum(1 for f in self._isnp if f)

    cdef object _to_np(self, list v):
        for x in v:
            if x > _SAFE or x < -_SAFE:
                return None
        return np.array([int(x) for x in v], dtype=np.int64)

    cdef list _row_as_list(self, Py_ssize_t t):
        if self._isnp[t]:
            return [_mpz(int(x)) for x in self._rows[t]]
        return <list>self._rows[t]

    cdef tuple _reduce_int(self, vec):
        """Returns (npvec or None, list or None): exactly one is set."""
        cdef list v = _vec_to_int(vec, self.width)
        cdef object vnp = self._to_np(v)
        cdef object prev = 1
        cdef Py_ssize_t c = 0, t, j
        cdef object a, p, ok
        while True:
            # find the current leading nonzero at or beyond c
            if vnp is not None:
                nz = np.nonzero(vnp[c:])[0]
                if nz.size == 0:
                    return vnp, None
                c = c + <Py_ssize_t>nz[0]
            else:
                j = c
                while j < self.width and v[j] == 0:
                    j += 1
                if j == self.width:
                    return None, v
                c = j
            if c not in self._pivmap:
                return (vnp, None) if vnp is not None else (None, v)
            t = self._pivmap[c]
            if vnp is not None:
                a = int(vnp[c])
                if self._isnp[t]:
                    p = int((<object>self._rows[t])[c])
                    ok, vnp = _np_eliminate(vnp, self._rows[t], a, p, prev)
                    if ok:
                        prev = p
                        continue
                v = [_mpz(int(x)) for x in vnp]
                vnp = None
            row = self._row_as_list(t)
            a = v[c]
            p = row[c]
            _int_eliminate(v, row, a, p, self.width)
            ap = abs(prev)
            ok = False
            if ap > 1:
                ok = True
                for j in range(self.width):
                    if v[j] % ap != 0:
                        ok = False
                        break
                if ok:
                    for j in range(self.width):
                        v[j] //= ap
            if not ok:
                _int_normalize(v, self.width)
            prev = p

    def residual(self, vec):
        vnp, v = self._reduce_int(vec)
        if vnp is not None:
            return [Fraction(int(x)) for x in vnp]
        return [Fraction(int(x)) for x in v]

    def contains(self, vec):
        vnp, v = self._reduce_int(vec)
        if vnp is not None:
            return not np.any(vnp)
        for x in v:
            if x != 0:
                return False
        return True

    def insert(self, vec):
        return self.insert_residual(vec) is not None

    def insert_residual(self, vec):
        """Insert; returns the reduced primitive integer row when the vector
        was new (a copy, as plain ints), or None when dependent."""
        cdef object vnp
        cdef list v
        vnp, v = self._reduce_int(vec)
        cdef Py_ssize_t piv = -1, j
        if vnp is not None:
            vnp = _np_normalize(vnp)
            nz = np.nonzero(vnp)[0]
            if nz.size == 0:
                return None
            piv = <Py_ssize_t>nz[0]
        else:
            _int_normalize(v, self.width)
            for j in range(self.width):
                if v[j] != 0:
                    piv = j
                    break
            if piv < 0:
                return None
        cdef Py_ssize_t t = len(self.pivots)
        if vnp is not None:
            self._rows.append(vnp)
            self._isnp.append(True)
            out = [int(x) for x in vnp]
        else:
            self._rows.append(v)
            self._isnp.append(False)
            out = [int(x) for x in v]
        self.pivots.append(piv)
        self._pivmap[piv] = t
        return out

    def express(self, vec):
        """Coefficients of vec wrt the stored rows; None when not in span."""
        cdef list v = [Fraction(x) for x in vec]
        coeffs = [_ZERO] * len(self.pivots)
        cdef Py_ssize_t c = 0, j, t
        while True:
            while c < self.width and not v[c]:
                c += 1
            if c == self.width:
                return coeffs
            if c not in self._pivmap:
                return None
            t = self._pivmap[c]
            row = self._row_as_list(t)
            f = v[c] / Fraction(int(row[c]))
            coeffs[t] = f
            for j in range(c, self.width):
                if row[j] != 0:
                    v[j] -= f * Fraction(int(row[j]))
        return coeffs

    def coords(self, vec):
        return self.express(vec)

    def rows(self):
        """The stored rows as Fractions, scaled to leading coefficient 1."""
        out = []
        cdef Py_ssize_t t, j
        cdef object piv_val
        for t in range(len(self.pivots)):
            row = self._row_as_list(t)
            piv_val = row[self.pivots[t]]
            out.append([Fraction(int(row[j]), int(piv_val)) for j in range(self.width)])
        return out

    def int_rows(self):
        """The stored primitive integer rows (copies)."""
        out = []
        cdef Py_ssize_t t
        for t in range(len(self.pivots)):
            out.append([int(x) for x in self._row_as_list(t)])
        return out


def int_mat_mul(A, B):
    """Exact product of integer matrices (int64-vectorized when safe)."""
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t k = len(B)
    cdef Py_ssize_t m = len(B[0]) if k else 0
    cdef object ma = 0, mb = 0
    cdef object x
    for row in A:
        for x in row:
            if x > ma: ma = x
            if -x > ma: ma = -x
    for row in B:
        for x in row:
            if x > mb: mb = x
            if -x > mb: mb = -x
    if ma * mb * max(k, 1) < _SAFE:
        An = np.array([[int(x) for x in row] for row in A], dtype=np.int64)
        Bn = np.array([[int(x) for x in row] for row in B], dtype=np.int64)
        Cn = An @ Bn
        return [[int(x) for x in row] for row in Cn.tolist()]
    out = []
    cdef Py_ssize_t i, t, j
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
    """Trace-form Gram matrix of flattened d x d integer matrices:
    G[i][j] = tr(M_i M_j)."""
    cdef Py_ssize_t k = len(flats)
    if k == 0:
        return []
    d2 = len(flats[0])
    cdef object mx = 0
    for f in flats:
        for x in f:
            if x > mx: mx = x
            if -x > mx: mx = -x
    if mx * mx * d2 < _SAFE:
        V = np.array([[int(x) for x in f] for f in flats], dtype=np.int64)
        # transpose each d x d block: tr(MN) = <flat(M), flat(N^T)>
        W = V.reshape(k, d, d).transpose(0, 2, 1).reshape(k, d2)
        G = V @ W.T
        return [[int(x) for x in row] for row in G.tolist()]
    out = []
    cdef Py_ssize_t i, j, a, b
    for i in range(k):
        row = []
        for j in range(k):
            s = 0
            for a in range(d):
                for b in range(d):
                    x = flats[i][a * d + b]
                    if x:
                        y = flats[j][b * d + a]
                        if y:
                            s += x * y
            row.append(s)
        out.append(row)
    return out
