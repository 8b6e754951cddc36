"""Exact coefficient arithmetic.

Three nested rings, all with exact rational coefficients:

* ``Scalar`` -- Laurent polynomials in the deformation variable ``v``
  (the algebra uses ``p = v**2``),
* ``GroupAlgebraElement`` -- the group algebra of the cocharacter lattice
  ``Z^n`` with Scalar coefficients, written in the theta basis,
* ``RationalFunction`` -- the fraction field of the group algebra, used by
  normalized intertwiners and the Whittaker solve.

All values are immutable after construction; no mutation, no floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Scalar",
    "GroupAlgebraElement",
    "RationalFunction",
    "NotDivisibleError",
    "ZeroDenominatorError",
    "scalar_arith",
    "ga_exact_div",
    "rf_normalize",
]


class NotDivisibleError(ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


class ZeroDenominatorError(ZeroDivisionError):
    """A RationalFunction was built with denominator 0."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Scalar:
    """A Laurent polynomial in v over Q, stored sparsely.

    >>> Scalar.v(1) * Scalar.v(-1) == Scalar.one()
    True
    >>> (Scalar.p() - 1) + Scalar.one() == Scalar.p()
    True
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _frac(c)
                if c != 0:
                    clean[int(e)] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return Scalar()

    @staticmethod
    def one() -> "Scalar":
        return Scalar({0: Fraction(1)})

    @staticmethod
    def from_rational(c) -> "Scalar":
        return Scalar({0: _frac(c)})

    @staticmethod
    def v(exp: int = 1) -> "Scalar":
        """The monomial v**exp."""
        return Scalar({exp: Fraction(1)})

    @staticmethod
    def p(exp: int = 1) -> "Scalar":
        """p = v**2, so p(exp) is v**(2*exp)."""
        return Scalar({2 * exp: Fraction(1)})

    # -- ring operations ----------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        return Scalar.from_rational(other)

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        res = Scalar.__new__(Scalar)
        res.coeffs = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        res = Scalar.__new__(Scalar)
        res.coeffs = {e: -c for e, c in self.coeffs.items()}
        return res

    def __sub__(self, other) -> "Scalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        res = Scalar.__new__(Scalar)
        res.coeffs = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            raise ValueError("use exact_div for negative powers of non-monomials")
        out = Scalar.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exact_div(self, other: "Scalar") -> "Scalar":
        """Exact division in Q[v, v^-1]; raises NotDivisibleError otherwise."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Scalar")
        if self.is_zero():
            return Scalar.zero()
        # strip v-powers so both sides are honest polynomials
        sh_num = min(self.coeffs)
        sh_den = min(other.coeffs)
        num = [Fraction(0)] * (max(self.coeffs) - sh_num + 1)
        for e, c in self.coeffs.items():
            num[e - sh_num] = c
        den = [Fraction(0)] * (max(other.coeffs) - sh_den + 1)
        for e, c in other.coeffs.items():
            den[e - sh_den] = c
        if len(num) < len(den):
            raise NotDivisibleError("degree too small")
        quot = [Fraction(0)] * (len(num) - len(den) + 1)
        rem = list(num)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + len(den) - 1] / den[-1]
            quot[i] = c
            if c != 0:
                for j, d in enumerate(den):
                    rem[i + j] -= c * d
        if any(rem):
            raise NotDivisibleError("nonzero remainder in Scalar division")
        shift = sh_num - sh_den
        return Scalar({i + shift: c for i, c in enumerate(quot) if c != 0})

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == {0: Fraction(1)}

    def constant_term(self) -> Fraction:
        return self.coeffs.get(0, Fraction(0))

    def evaluate(self, q: Fraction) -> Fraction:
        """Specialize v = q."""
        q = _frac(q)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * q**e
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c}*v" if c != 1 else "v")
            else:
                parts.append(f"{c}*v^{e}" if c != 1 else f"v^{e}")
        return " + ".join(parts)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatch form of the Scalar ring operations (add, mul, neg)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


class GroupAlgebraElement:
    """An element of the group algebra of Z^n in the theta basis.

    Terms map a lattice vector ``y`` (an int tuple of length n) to a Scalar
    coefficient; multiplication adds lattice vectors.  This ring houses the
    commutative part of the Bernstein presentation and the coefficient ring
    R of the universal principal series.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, Scalar] | None = None):
        self.n = n
        clean: dict[tuple, Scalar] = {}
        if terms:
            for y, c in terms.items():
                y = tuple(int(t) for t in y)
                if len(y) != n:
                    raise ValueError(f"lattice vector {y} has wrong length for n={n}")
                if not isinstance(c, Scalar):
                    c = Scalar.from_rational(c)
                if not c.is_zero():
                    clean[y] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(n: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(n)

    @staticmethod
    def one(n: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(n, {(0,) * n: Scalar.one()})

    @staticmethod
    def theta(y: Iterable[int], n: int | None = None) -> "GroupAlgebraElement":
        y = tuple(int(t) for t in y)
        if n is None:
            n = len(y)
        return GroupAlgebraElement(n, {y: Scalar.one()})

    @staticmethod
    def from_scalar(c: Scalar, n: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement(n, {(0,) * n: c})

    # -- ring operations ----------------------------------------------

    def _check(self, other: "GroupAlgebraElement"):
        if self.n != other.n:
            raise ValueError("rank mismatch")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for y, c in other.terms.items():
            s = out.get(y)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(y, None)
            else:
                out[y] = s
        res = GroupAlgebraElement.__new__(GroupAlgebraElement)
        res.n, res.terms = self.n, out
        return res

    def __neg__(self) -> "GroupAlgebraElement":
        res = GroupAlgebraElement.__new__(GroupAlgebraElement)
        res.n = self.n
        res.terms = {y: -c for y, c in self.terms.items()}
        return res

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupAlgebraElement":
        if isinstance(other, (int, Fraction, Scalar)):
            c0 = other if isinstance(other, Scalar) else Scalar.from_rational(other)
            res = GroupAlgebraElement.__new__(GroupAlgebraElement)
            res.n = self.n
            res.terms = {}
            for y, c in self.terms.items():
                pc = c * c0
                if not pc.is_zero():
                    res.terms[y] = pc
            return res
        self._check(other)
        out: dict[tuple, Scalar] = {}
        for y1, c1 in self.terms.items():
            for y2, c2 in other.terms.items():
                y = tuple(a + b for a, b in zip(y1, y2))
                s = out.get(y)
                p = c1 * c2
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(y, None)
                else:
                    out[y] = s
        res = GroupAlgebraElement.__new__(GroupAlgebraElement)
        res.n, res.terms = self.n, out
        return res

    __rmul__ = __mul__

    # -- structure maps ------------------------------------------------

    def apply_lattice_map(self, f) -> "GroupAlgebraElement":
        """Apply a map y -> f(y) on lattice vectors (e.g. a Weyl action)."""
        out: dict[tuple, Scalar] = {}
        for y, c in self.terms.items():
            z = tuple(f(y))
            s = out.get(z)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(z, None)
            else:
                out[z] = s
        res = GroupAlgebraElement.__new__(GroupAlgebraElement)
        res.n, res.terms = self.n, out
        return res

    def evaluate(self, point: tuple, q: Fraction) -> Fraction:
        """Evaluate at a torus point (a tuple of nonzero rationals) and v=q."""
        total = Fraction(0)
        for y, c in self.terms.items():
            m = Fraction(1)
            for t, e in zip(point, y):
                m *= _frac(t) ** e
            total += c.evaluate(q) * m
        return total

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.n: Scalar.one()}

    def support(self):
        return self.terms.keys()

    def leading(self) -> tuple:
        """Lex-largest lattice vector in the support."""
        return max(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset((y, c) for y, c in self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for y in sorted(self.terms):
            c = self.terms[y]
            if all(t == 0 for t in y):
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*th{list(y)}")
        return " + ".join(parts)


def ga_exact_div(
    f: GroupAlgebraElement, g: GroupAlgebraElement
) -> GroupAlgebraElement:
    """Exact division in the group algebra: return h with g*h = f.

    Laurent monomials are units, so the division reduces to multivariate
    polynomial division with lex leading terms; coefficient division happens
    in Q[v, v^-1] and is exact whenever g | f.  Raises NotDivisibleError on
    a malformed quotient, which in the Bernstein rewriting signals a bug.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero element")
    if f.is_zero():
        return GroupAlgebraElement.zero(f.n)
    if f.n != g.n:
        raise ValueError("rank mismatch")
    n = f.n
    # In a domain, componentwise min and max exponents are additive under
    # multiplication, so any true quotient has support inside this box.
    lo = tuple(
        min(y[i] for y in f.terms) - min(y[i] for y in g.terms) for i in range(n)
    )
    hi = tuple(
        max(y[i] for y in f.terms) - max(y[i] for y in g.terms) for i in range(n)
    )
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisibleError("support box is empty")
    quot: dict[tuple, Scalar] = {}
    rem = f
    g_lead = g.leading()
    g_lc = g.terms[g_lead]
    # quotient monomials strictly lex-decrease, so the box bounds the loop
    while not rem.is_zero():
        r_lead = rem.leading()
        y = tuple(a - b for a, b in zip(r_lead, g_lead))
        if any(t < a or t > b for t, a, b in zip(y, lo, hi)):
            raise NotDivisibleError("quotient support leaves the feasible box")
        try:
            c = rem.terms[r_lead].exact_div(g_lc)
        except NotDivisibleError:
            raise NotDivisibleError("leading coefficient does not divide")
        quot[y] = c
        rem = rem - g * GroupAlgebraElement(n, {y: c})
    res = GroupAlgebraElement.__new__(GroupAlgebraElement)
    res.n, res.terms = n, {y: c for y, c in quot.items() if not c.is_zero()}
    return res


class RationalFunction:
    """A fraction num/den of group algebra elements.

    Equality is tested by cross-multiplication.  Normalization does not
    compute multivariate GCDs; it cancels monomial (unit) factors and uses
    exact division when the denominator happens to divide the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: GroupAlgebraElement, den: GroupAlgebraElement | None = None):
        if den is None:
            den = GroupAlgebraElement.one(num.n)
        if den.is_zero():
            raise ZeroDenominatorError("denominator is zero")
        self.num = num
        self.den = den

    @property
    def n(self) -> int:
        return self.num.n

    @staticmethod
    def from_ga(x: GroupAlgebraElement) -> "RationalFunction":
        return RationalFunction(x)

    @staticmethod
    def zero(n: int) -> "RationalFunction":
        return RationalFunction(GroupAlgebraElement.zero(n))

    @staticmethod
    def one(n: int) -> "RationalFunction":
        return RationalFunction(GroupAlgebraElement.one(n))

    # -- field operations ----------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, GroupAlgebraElement):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, Scalar)):
            c = other if isinstance(other, Scalar) else Scalar.from_rational(other)
            return RationalFunction(GroupAlgebraElement.from_scalar(c, self.n))
        raise TypeError(f"cannot coerce {type(other).__name__}")

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        return rf_normalize(
            RationalFunction(
                self.num * other.den + other.num * self.den, self.den * other.den
            )
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        return rf_normalize(
            RationalFunction(self.num * other.num, self.den * other.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return rf_normalize(
            RationalFunction(self.num * other.den, self.den * other.num)
        )

    def inv(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return rf_normalize(RationalFunction(self.den, self.num))

    def apply_lattice_map(self, f) -> "RationalFunction":
        return RationalFunction(
            self.num.apply_lattice_map(f), self.den.apply_lattice_map(f)
        )

    def evaluate(self, point: tuple, q: Fraction) -> Fraction:
        d = self.den.evaluate(point, q)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point, q) / d

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar, GroupAlgebraElement)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __repr__(self) -> str:
        return f"({self.num!r}) / ({self.den!r})"


def rf_normalize(r: RationalFunction) -> RationalFunction:
    """Cancel monomial factors and fix the representation convention.

    The denominator is shifted so its lex-smallest monomial is constant and
    that constant is scaled to have lowest v-coefficient 1; if after that the
    denominator exactly divides the numerator, the fraction collapses to
    quotient/1.  Equal functions that differ by a shared monomial factor get
    equal representations.
    """
    num, den = r.num, r.den
    if den.is_zero():
        raise ZeroDenominatorError("denominator is zero")
    n = num.n
    if num.is_zero():
        return RationalFunction(
            GroupAlgebraElement.zero(n), GroupAlgebraElement.one(n)
        )
    # shift both by the inverse of den's smallest monomial
    y0 = min(den.terms)
    c0 = den.terms[y0]
    v0 = min(c0.coeffs)
    a0 = c0.coeffs[v0]
    unit = GroupAlgebraElement(
        n, {tuple(-t for t in y0): Scalar({-v0: Fraction(1) / a0})}
    )
    num = num * unit
    den = den * unit
    try:
        q = ga_exact_div(num, den)
        return RationalFunction(q, GroupAlgebraElement.one(n))
    except NotDivisibleError:
        return RationalFunction(num, den)
