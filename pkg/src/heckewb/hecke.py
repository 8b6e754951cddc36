"""The twisted affine Hecke algebra in Bernstein normal form.

Elements are sums  sum c * theta_y T_w T_gamma^eps  with c a Laurent
polynomial in v.  Multiplication rewrites every product back into this
normal form using the defining relations:

* (T_s + 1)(T_s - v^2) = 0,
* T_u T_w = T_{uw} when lengths add,
* theta_y theta_z = theta_{y+z},
* theta_y T_s - T_s theta_{s(y)} = (p - 1)(theta_y - theta_{s(y)})/(1 - theta_{-alpha}),
* T_gamma^2 = 1  and  T_gamma theta_y T_w T_gamma = theta_{gamma(y)} T_{gamma(w)},

with p = v^2.  The Bernstein correction term is evaluated through the
geometric series, so no division is performed during rewriting.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from heckewb.scalars import GroupAlgebraElement, Scalar
from heckewb import weyl
from heckewb.weyl import (
    Perm,
    gamma_lattice,
    gamma_perm,
    identity,
    inverse,
    inversion_roots,
    length,
    mult,
    reduced_word,
    root_vector,
    simple_reflection,
)

__all__ = [
    "HeckeElement",
    "RankMismatchError",
    "MixedInputError",
    "intertwiner",
    "normalized_intertwiner",
    "intertwiner_denominator",
    "is_central",
    "right_form",
]

_ONE = Scalar.one()
_P = Scalar.p()
_P_MINUS_1 = Scalar.p() - Scalar.one()
_P_SQ = Scalar.p() * Scalar.p()


class RankMismatchError(ValueError):
    """Operands live in algebras of different rank."""


class MixedInputError(ValueError):
    """gamma_twist is only defined on the plain (eps = 0) subalgebra."""


def _bernstein_kappa(y: Perm, i: int):
    """The pure-theta correction kappa with
    theta_y T_s = T_s theta_{s(y)} + kappa  and
    T_s theta_y = theta_{s(y)} T_s + kappa.

    Returns a list of (lattice vector, Scalar).  kappa is
    (p-1)(theta_y - theta_{s(y)})/(1 - theta_{-alpha}) expanded as a
    geometric series; exactness of that division is what makes the
    presentation consistent.
    """
    k = y[i] - y[i + 1]
    if k == 0:
        return []
    n = len(y)
    alpha = root_vector(i, i + 1, n)
    out = []
    if k > 0:
        base = y
        for t in range(k):
            z = tuple(a - t * b for a, b in zip(base, alpha))
            out.append((z, _P_MINUS_1))
    else:
        sy = list(y)
        sy[i], sy[i + 1] = sy[i + 1], sy[i]
        base = tuple(sy)
        for t in range(-k):
            z = tuple(a - t * b for a, b in zip(base, alpha))
            out.append((z, -_P_MINUS_1))
    return out


@lru_cache(maxsize=None)
def _finite_mult_simple(m: Perm, i: int):
    """T_m * T_{s_i} in the finite Hecke algebra, as a tuple of (perm, Scalar)."""
    n = len(m)
    ms = mult(m, simple_reflection(i, n))
    if length(ms) > length(m):
        return ((ms, _ONE),)
    return ((m, _P_MINUS_1), (ms, _P))


@lru_cache(maxsize=None)
def _finite_mult(m: Perm, w: Perm):
    """T_m * T_w as a dict-equivalent tuple of (perm, Scalar)."""
    acc = {m: _ONE}
    for i in reduced_word(w):
        nxt: dict[Perm, Scalar] = {}
        for u, c in acc.items():
            for u2, c2 in _finite_mult_simple(u, i):
                s = nxt.get(u2)
                p = c * c2
                s = p if s is None else s + p
                if s.is_zero():
                    nxt.pop(u2, None)
                else:
                    nxt[u2] = s
        acc = nxt
    return tuple(acc.items())


@lru_cache(maxsize=None)
def _theta_left(w: Perm, y: tuple):
    """T_w * theta_y in left normal form: a tuple of (z, m, Scalar) meaning
    sum c * theta_z T_m."""
    if length(w) == 0:
        return ((y, w, _ONE),)
    word = reduced_word(w)
    i = word[0]
    n = len(w)
    rest = weyl.from_word(word[1:], n)
    inner = _theta_left(rest, y)
    acc: dict[tuple, Scalar] = {}

    def add(z, m, c):
        key = (z, m)
        s = acc.get(key)
        s = c if s is None else s + c
        if s.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = s

    for z, m, c in inner:
        # T_s theta_z = theta_{s z} T_s + kappa(z), then theta_{sz} (T_s T_m)
        sz = list(z)
        sz[i], sz[i + 1] = sz[i + 1], sz[i]
        for m2, c2 in _finite_mult(simple_reflection(i, n), m):
            add(tuple(sz), m2, c * c2)
        for zk, ck in _bernstein_kappa(z, i):
            add(zk, m, c * ck)
    return tuple((z, m, c) for (z, m), c in acc.items())


@lru_cache(maxsize=None)
def _theta_right(y: tuple, w: Perm):
    """theta_y * T_w in right form: a tuple of (m, z, Scalar) meaning
    sum T_m * c * theta_z  (theta on the right)."""
    if length(w) == 0:
        return ((w, y, _ONE),)
    word = reduced_word(w)
    i = word[0]
    n = len(w)
    rest = weyl.from_word(word[1:], n)
    acc: dict[tuple, Scalar] = {}

    def add(m, z, c):
        key = (m, z)
        s = acc.get(key)
        s = c if s is None else s + c
        if s.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = s

    # theta_y T_s = T_s theta_{s y} + kappa(y)
    sy = list(y)
    sy[i], sy[i + 1] = sy[i + 1], sy[i]
    for m, z, c in _theta_right(tuple(sy), rest):
        for m2, c2 in _finite_mult(simple_reflection(i, n), m):
            add(m2, z, c * c2)
    for zk, ck in _bernstein_kappa(y, i):
        for m, z, c in _theta_right(zk, rest):
            add(m, z, c * ck)
    return tuple((m, z, c) for (m, z), c in acc.items())


class HeckeElement:
    """An element of H(G+, v) in the normal form theta-left, T_w, T_gamma."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean: dict[tuple, Scalar] = {}
        if terms:
            for (y, w, e), c in terms.items():
                if not isinstance(c, Scalar):
                    c = Scalar.from_rational(c)
                if c.is_zero():
                    continue
                key = (tuple(y), tuple(w), int(e) & 1)
                if key in clean:
                    s = clean[key] + c
                    if s.is_zero():
                        del clean[key]
                    else:
                        clean[key] = s
                else:
                    clean[key] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(n: int) -> "HeckeElement":
        return HeckeElement(n)

    @staticmethod
    def one(n: int) -> "HeckeElement":
        return HeckeElement(n, {((0,) * n, identity(n), 0): _ONE})

    @staticmethod
    def from_scalar(c, n: int) -> "HeckeElement":
        return HeckeElement(n, {((0,) * n, identity(n), 0): c})

    @staticmethod
    def T(w, n: int | None = None) -> "HeckeElement":
        """T_w for a permutation, or T_{s_i} when given an index with n."""
        if isinstance(w, int):
            if n is None:
                raise ValueError("T(i, n) needs the rank")
            w = simple_reflection(w, n)
        w = tuple(w)
        n = len(w)
        return HeckeElement(n, {((0,) * n, w, 0): _ONE})

    @staticmethod
    def theta(y) -> "HeckeElement":
        y = tuple(y)
        n = len(y)
        return HeckeElement(n, {(y, identity(n), 0): _ONE})

    @staticmethod
    def T_gamma(n: int) -> "HeckeElement":
        return HeckeElement(n, {((0,) * n, identity(n), 1): _ONE})

    @staticmethod
    def from_ga(x: GroupAlgebraElement) -> "HeckeElement":
        e = identity(x.n)
        return HeckeElement(x.n, {(y, e, 0): c for y, c in x.terms.items()})

    # -- linear structure ----------------------------------------------

    def _check(self, other: "HeckeElement"):
        if self.n != other.n:
            raise RankMismatchError(f"rank {self.n} vs {other.n}")

    def __add__(self, other) -> "HeckeElement":
        other = self._coerce(other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        res = HeckeElement.__new__(HeckeElement)
        res.n, res.terms = self.n, out
        return res

    __radd__ = __add__

    def __neg__(self) -> "HeckeElement":
        res = HeckeElement.__new__(HeckeElement)
        res.n = self.n
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "HeckeElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "HeckeElement":
        return self._coerce(other) + (-self)

    def _coerce(self, other) -> "HeckeElement":
        if isinstance(other, HeckeElement):
            return other
        if isinstance(other, GroupAlgebraElement):
            return HeckeElement.from_ga(other)
        if isinstance(other, Scalar):
            return HeckeElement.from_scalar(other, self.n)
        return HeckeElement.from_scalar(Scalar.from_rational(other), self.n)

    # -- multiplication -------------------------------------------------

    def __mul__(self, other) -> "HeckeElement":
        if isinstance(other, (int, Fraction, Scalar)):
            c0 = other if isinstance(other, Scalar) else Scalar.from_rational(other)
            res = HeckeElement.__new__(HeckeElement)
            res.n = self.n
            res.terms = {}
            for k, c in self.terms.items():
                p = c * c0
                if not p.is_zero():
                    res.terms[k] = p
            return res
        other = self._coerce(other)
        self._check(other)
        out: dict[tuple, Scalar] = {}

        def add(y, w, e, c):
            key = (y, w, e)
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s

        for (y1, w1, e1), c1 in self.terms.items():
            for (y2, w2, e2), c2 in other.terms.items():
                c = c1 * c2
                if e1:
                    y2p = gamma_lattice(y2)
                    w2p = gamma_perm(w2)
                else:
                    y2p, w2p = y2, w2
                e = e1 ^ e2
                # theta_{y1} (T_{w1} theta_{y2p}) T_{w2p}
                for z, m, cm in _theta_left(w1, y2p):
                    zz = tuple(a + b for a, b in zip(y1, z))
                    for m2, cf in _finite_mult(m, w2p):
                        add(zz, m2, e, c * cm * cf)
        res = HeckeElement.__new__(HeckeElement)
        res.n, res.terms = self.n, out
        return res

    __rmul__ = __mul__

    # -- structure maps --------------------------------------------------

    def gamma_twist(self) -> "HeckeElement":
        """The algebra automorphism theta_y T_w -> theta_{gamma y} T_{gamma w}
        of the plain subalgebra."""
        out = {}
        for (y, w, e), c in self.terms.items():
            if e:
                raise MixedInputError("gamma_twist is defined on the eps=0 part")
            out[(gamma_lattice(y), gamma_perm(w), 0)] = c
        res = HeckeElement.__new__(HeckeElement)
        res.n, res.terms = self.n, out
        return res

    def theta_part_if_pure(self) -> GroupAlgebraElement | None:
        """Return the group algebra element when no T_w or T_gamma occurs."""
        e = identity(self.n)
        ga = {}
        for (y, w, eps), c in self.terms.items():
            if w != e or eps:
                return None
            ga[y] = c
        return GroupAlgebraElement(self.n, ga)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar, GroupAlgebraElement)):
            other = self._coerce(other)
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (y, w, e) in sorted(self.terms, key=lambda k: (k[2], k[1], k[0])):
            c = self.terms[(y, w, e)]
            bits = [f"({c})"]
            if any(y):
                bits.append(f"th{list(y)}")
            if w != identity(self.n):
                bits.append(f"T{list(w)}")
            if e:
                bits.append("Tg")
            parts.append("*".join(bits))
        return " + ".join(parts)


def right_form(h: HeckeElement):
    """Rewrite h as  sum T_w * r_w * T_gamma^eps  with r_w in the group
    algebra; returns a dict (w, eps) -> GroupAlgebraElement."""
    out: dict[tuple, GroupAlgebraElement] = {}
    n = h.n
    for (y, w, e), c in h.terms.items():
        for m, z, cm in _theta_right(y, w):
            key = (m, e)
            ga = out.get(key)
            piece = GroupAlgebraElement(n, {z: c * cm})
            out[key] = piece if ga is None else ga + piece
    return {k: v for k, v in out.items() if not v.is_zero()}


def intertwiner(w, n: int | None = None) -> HeckeElement:
    """The intertwining element iota_w = iota_{s_1} ... iota_{s_m} over the
    deterministic reduced word of w, with
    iota_s = T_s (1 - theta_alpha) + (p - 1) theta_alpha."""
    if isinstance(w, int):
        if n is None:
            raise ValueError("intertwiner(i, n) needs the rank")
        return _intertwiner_simple(w, n)
    w = tuple(w)
    n = len(w)
    out = HeckeElement.one(n)
    for i in reduced_word(w):
        out = out * _intertwiner_simple(i, n)
    return out


@lru_cache(maxsize=None)
def _intertwiner_simple(i: int, n: int) -> HeckeElement:
    alpha = root_vector(i, i + 1, n)
    th_a = HeckeElement.theta(alpha)
    return HeckeElement.T(i, n) * (HeckeElement.one(n) - th_a) + th_a * _P_MINUS_1


def intertwiner_denominator(w, n: int | None = None) -> GroupAlgebraElement:
    """The denominator n paired with iota_w: the product of p - theta_{-beta}
    over the inversion set of w^{-1}.

    Folding the one-letter normalizations of iota_w = iota_{s_1}...iota_{s_m}
    to the right composes the Weyl twists in reverse, which lands on the
    inversions of w^{-1} in this composition convention; iota_w times the
    inverse of this element is the normalized intertwiner, and the identity
    iota_w^0 = iota_{s_1}^0 ... iota_{s_m}^0 holds on the nose.
    """
    if isinstance(w, int):
        w = simple_reflection(w, n)
    w = tuple(w)
    n = len(w)
    out = GroupAlgebraElement.one(n)
    for (i, j) in inversion_roots(inverse(w)):
        beta = root_vector(i, j, n)
        out = out * (
            GroupAlgebraElement.from_scalar(_P, n)
            - GroupAlgebraElement.theta(tuple(-t for t in beta))
        )
    return out


def normalized_intertwiner(w, n: int | None = None):
    """The pair (iota_w, n_w) representing iota_w^0 = iota_w * n_w^{-1}
    without forming fractions."""
    if isinstance(w, int):
        w = simple_reflection(w, n)
    return intertwiner(w), intertwiner_denominator(w)


def is_central(a: HeckeElement) -> bool:
    """True iff a commutes with all T_{s_i}, with theta_{e_1}, and with
    T_gamma; by the center lemma this characterizes the center."""
    n = a.n
    gens = [HeckeElement.T(i, n) for i in range(n - 1)]
    e1 = tuple(1 if t == 0 else 0 for t in range(n))
    gens.append(HeckeElement.theta(e1))
    gens.append(HeckeElement.T_gamma(n))
    return all((a * g - g * a).is_zero() for g in gens)
