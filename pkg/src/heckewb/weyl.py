"""The symmetric group S_n, its order-2 extension, and lattice actions.

Permutations are tuples in one-line notation on ``range(n)``: ``w[i]`` is the
image of position ``i``.  Composition is ``(u * v)(i) = u(v(i))``.  The outer
automorphism ``gamma`` sends the simple reflection at position ``i`` to the
one at position ``n-2-i`` and acts on the lattice Z^n by negated reversal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Perm",
    "identity",
    "simple_reflection",
    "mult",
    "inverse",
    "length",
    "reduced_word",
    "from_word",
    "longest_element",
    "all_perms",
    "all_reduced_words",
    "bruhat_leq",
    "gamma_perm",
    "gamma_lattice",
    "act_on_lattice",
    "inversion_roots",
    "min_coset_reps",
    "coset_decompose",
    "ExtendedWeylElement",
    "DimensionMismatchError",
]

Perm = tuple

class DimensionMismatchError(ValueError):
    """A lattice vector has the wrong length for the acting group."""


def identity(n: int) -> Perm:
    return tuple(range(n))


def simple_reflection(i: int, n: int) -> Perm:
    """s_i swaps i and i+1 (0-indexed positions)."""
    if not 0 <= i < n - 1:
        raise ValueError(f"simple reflection index {i} out of range for n={n}")
    w = list(range(n))
    w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def mult(u: Perm, v: Perm) -> Perm:
    """Composition (u*v)(i) = u(v(i))."""
    return tuple(u[v[i]] for i in range(len(u)))


def inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, x in enumerate(w):
        inv[x] = i
    return tuple(inv)


def length(w: Perm) -> int:
    """Number of inversions."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def reduced_word(w: Perm) -> tuple:
    """A reduced word (i_1, ..., i_m) with s_{i_1} * ... * s_{i_m} = w.

    Computed by bubble sort, always removing the smallest descent first, so
    the word is deterministic.
    """
    w = list(w)
    word = []
    while True:
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                break
        else:
            break
    return tuple(reversed(word))


def from_word(word, n: int) -> Perm:
    w = identity(n)
    for i in word:
        w = mult(w, simple_reflection(i, n))
    return w


def longest_element(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def all_perms(n: int):
    return [tuple(p) for p in itertools.permutations(range(n))]


def all_reduced_words(w: Perm):
    """Every reduced word of w, by recursion on descents."""
    if length(w) == 0:
        return [()]
    n = len(w)
    words = []
    for i in range(n - 1):
        if w[i] > w[i + 1]:  # right descent: l(w*s_i) < l(w)
            for sub in all_reduced_words(mult(w, simple_reflection(i, n))):
                words.append(sub + (i,))
    return words


def _rank_table(w: Perm):
    """Northwest rank function R(a,b) = #{ i <= a : w(i) <= b }, 1-indexed."""
    n = len(w)
    R = [[0] * (n + 1) for _ in range(n + 1)]
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            R[a][b] = R[a - 1][b] + (1 if w[a - 1] <= b - 1 else 0)
    return R


def bruhat_leq(x: Perm, w: Perm) -> bool:
    """Bruhat order via the dot criterion: x <= w iff R_x >= R_w pointwise."""
    if len(x) != len(w):
        raise ValueError("permutations of different symmetric groups")
    Rx, Rw = _rank_table(x), _rank_table(w)
    n = len(x)
    return all(
        Rx[a][b] >= Rw[a][b] for a in range(1, n + 1) for b in range(1, n + 1)
    )


def gamma_perm(w: Perm) -> Perm:
    """Conjugation by the longest element: gamma(s_i) = s_{n-2-i}."""
    w0 = longest_element(len(w))
    return mult(w0, mult(w, w0))


def gamma_lattice(y: tuple) -> tuple:
    """gamma on the cocharacter lattice: y -> -reverse(y)."""
    return tuple(-t for t in reversed(y))


def act_on_lattice(g, y: tuple) -> tuple:
    """Action on Z^n: a permutation permutes coordinates, gamma negates and
    reverses.  Accepts a Perm or an ExtendedWeylElement."""
    if isinstance(g, ExtendedWeylElement):
        if len(y) != len(g.perm):
            raise DimensionMismatchError(
                f"vector of length {len(y)} under rank {len(g.perm)}"
            )
        if g.flip:
            y = gamma_lattice(y)
        g = g.perm
    if len(y) != len(g):
        raise DimensionMismatchError(
            f"vector of length {len(y)} under rank {len(g)}"
        )
    out = [0] * len(y)
    for i, t in enumerate(y):
        out[g[i]] = t
    return tuple(out)


def inversion_roots(w: Perm):
    """R_w = { positive roots beta : w^{-1} beta < 0 } as pairs (i, j), i<j.

    The pair (i, j) stands for the root e_i - e_j.
    """
    winv = inverse(w)
    n = len(w)
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if winv[i] > winv[j]
    ]


def root_vector(i: int, j: int, n: int) -> tuple:
    """The lattice vector e_i - e_j."""
    y = [0] * n
    y[i], y[j] = 1, -1
    return tuple(y)


def min_coset_reps(blocks, n: int):
    """Minimal-length representatives of W / W_Q for the parabolic W_Q given
    by consecutive position blocks (a list of block sizes summing to n).

    A representative is a permutation increasing on each block; reps are
    returned sorted by (length, one-line), so bases built from them are
    reproducible.
    """
    if sum(blocks) != n:
        raise ValueError("block sizes must sum to n")
    bounds = []
    start = 0
    for b in blocks:
        bounds.append((start, start + b))
        start += b
    reps = [
        w
        for w in all_perms(n)
        if all(
            w[i] < w[i + 1] for lo, hi in bounds for i in range(lo, hi - 1)
        )
    ]
    reps.sort(key=lambda w: (length(w), w))
    return reps


def coset_decompose(w: Perm, blocks):
    """Write w = u * x with u a minimal coset representative and x in W_Q.

    Lengths add: l(w) = l(u) + l(x).
    """
    n = len(w)
    u = list(w)
    x = identity(n)
    start = 0
    for b in blocks:
        # sort the block positions of u by bubbling, recording x
        for _ in range(b):
            for i in range(start, start + b - 1):
                if u[i] > u[i + 1]:
                    u[i], u[i + 1] = u[i + 1], u[i]
                    x = mult(x, simple_reflection(i, n))
        start += b
    # u * x = w  requires x on the right acting first: w = u . x
    return tuple(u), inverse(x)


@dataclass(frozen=True)
class ExtendedWeylElement:
    """An element of W+ = S_n x| <gamma>: a permutation and a flip bit."""

    perm: Perm
    flip: bool = False

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "ExtendedWeylElement") -> "ExtendedWeylElement":
        if self.n != other.n:
            raise DimensionMismatchError("rank mismatch")
        q = gamma_perm(other.perm) if self.flip else other.perm
        return ExtendedWeylElement(mult(self.perm, q), self.flip ^ other.flip)

    def inv(self) -> "ExtendedWeylElement":
        p = inverse(self.perm)
        if self.flip:
            p = gamma_perm(p)
        return ExtendedWeylElement(p, self.flip)

    def act(self, y: tuple) -> tuple:
        return act_on_lattice(self, y)

    def length(self) -> int:
        """gamma has length 0, so only the permutation part counts."""
        return length(self.perm)

    def reduced_word(self) -> tuple:
        return reduced_word(self.perm)


@lru_cache(maxsize=None)
def _cached_min_reps(blocks: tuple, n: int):
    return tuple(min_coset_reps(list(blocks), n))
