"""Segments, multisegments, and enhanced parameters with the gamma-duality.

A segment is an interval of consecutive exponents on one cuspidal line; the
line is labelled by a unit in Z/N (0 is the trivial character, N/2 the sign
character when N is even).  Exponents are half-integers stored doubled, so
all arithmetic stays integral.  The gamma-dual of (k, e, n) is
(-k mod N, -e-n+1, n); a multisegment is gamma-fixed when it equals its
segment-wise dual as a multiset.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "Segment",
    "Multisegment",
    "EnhancedParameter",
    "BlockSplit",
    "DifferentInfinitesimalError",
    "NotGammaFixedError",
    "enumerate_multisegments",
    "count_multisegments",
    "gamma_dual",
    "closure_leq",
    "component_group",
    "langlands_block_split",
    "enumerate_enhanced",
]


class DifferentInfinitesimalError(ValueError):
    """The two multisegments have different infinitesimal multisets."""


class NotGammaFixedError(ValueError):
    """A twisted construction was requested on a non-gamma-fixed parameter."""


@dataclass(frozen=True, order=True)
class Segment:
    """A segment [start, start+len-1] on the unit-`unit` line.

    ``start_x2`` is the doubled first exponent, so half-integer supports are
    exact integers here.
    """

    unit: int
    start_x2: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("segment length must be positive")

    @property
    def end_x2(self) -> int:
        return self.start_x2 + 2 * (self.length - 1)

    @property
    def center_x2(self) -> int:
        """Doubled central exponent (the z of the Steinberg datum)."""
        return self.start_x2 + (self.length - 1)

    def exponents_x2(self):
        return [self.start_x2 + 2 * i for i in range(self.length)]

    def dual(self, modulus: int) -> "Segment":
        return Segment((-self.unit) % modulus, -self.end_x2, self.length)

    def to_json(self) -> dict:
        return {"unit": self.unit, "start_x2": self.start_x2, "len": self.length}

    @staticmethod
    def from_json(d: dict) -> "Segment":
        return Segment(int(d["unit"]), int(d["start_x2"]), int(d["len"]))


@dataclass(frozen=True)
class Multisegment:
    """A multiset of segments, stored sorted."""

    segments: tuple

    def __init__(self, segments: Iterable[Segment]):
        object.__setattr__(self, "segments", tuple(sorted(segments)))

    @property
    def total(self) -> int:
        return sum(s.length for s in self.segments)

    def infinitesimal(self) -> tuple:
        """The multiset of (unit, exp_x2) pairs, sorted."""
        out = []
        for s in self.segments:
            out.extend((s.unit, e) for e in s.exponents_x2())
        return tuple(sorted(out))

    def dual(self, modulus: int) -> "Multisegment":
        return Multisegment(s.dual(modulus) for s in self.segments)

    def is_gamma_fixed(self, modulus: int) -> bool:
        return self.dual(modulus) == self

    def ordered_segments(self) -> tuple:
        """Segments in Langlands order: descending |p^center|, ties broken
        by (unit, start, len) so linked segments never precede wrongly."""
        return tuple(
            sorted(
                self.segments,
                key=lambda s: (-s.center_x2, s.unit, s.start_x2, s.length),
            )
        )

    def to_json(self) -> dict:
        return {"segments": [s.to_json() for s in self.segments]}

    @staticmethod
    def from_json(d) -> "Multisegment":
        if isinstance(d, str):
            d = json.loads(d)
        return Multisegment(Segment.from_json(s) for s in d["segments"])

    def __repr__(self) -> str:
        bits = ", ".join(
            f"({s.unit})[{s.start_x2}/2..{s.end_x2}/2]" for s in self.segments
        )
        return "{" + bits + "}"


@dataclass(frozen=True)
class EnhancedParameter:
    """A multisegment with a component-group label.

    rho is 'trivial' or 'sign' on gamma-fixed multisegments (component group
    of order 2) and 'none' otherwise.
    """

    m: Multisegment
    rho: str = "none"

    def __post_init__(self):
        if self.rho not in ("trivial", "sign", "none"):
            raise ValueError(f"bad rho {self.rho!r}")

    def validate(self, modulus: int):
        fixed = self.m.is_gamma_fixed(modulus)
        if fixed and self.rho == "none":
            raise ValueError("gamma-fixed parameter needs a rho in {trivial, sign}")
        if not fixed and self.rho != "none":
            raise ValueError("non-fixed parameter cannot carry a rho label")

    def to_json(self) -> dict:
        return {"m": self.m.to_json(), "rho": self.rho}


def gamma_dual(m: Multisegment, modulus: int = 2) -> Multisegment:
    return m.dual(modulus)


def component_group(m: Multisegment, modulus: int = 2) -> str:
    """'order2' iff the parameter is gamma-fixed, else 'trivial'."""
    return "order2" if m.is_gamma_fixed(modulus) else "trivial"


# -- enumeration -------------------------------------------------------


def _lambda_lines(lam):
    """Group an infinitesimal multiset into maximal consecutive runs.

    Returns a list of (unit, base_x2, multiplicities) with multiplicities
    over consecutive exponents base, base+1, ...
    """
    by_unit: dict[int, dict[int, int]] = {}
    for unit, e in lam:
        by_unit.setdefault(int(unit), {})
        by_unit[int(unit)][int(e)] = by_unit[int(unit)].get(int(e), 0) + 1
    runs = []
    for unit in sorted(by_unit):
        mults = by_unit[unit]
        exps = sorted(mults)
        start = exps[0]
        cur = [mults[start]]
        prev = start
        for e in exps[1:]:
            if e == prev + 2:
                cur.append(mults[e])
            else:
                runs.append((unit, start, tuple(cur)))
                start = e
                cur = [mults[e]]
            prev = e
        runs.append((unit, start, tuple(cur)))
    return runs


def _run_multisegments(mults: tuple):
    """All segment-length multisets on one consecutive run.

    A run is a tuple of multiplicities over exponents 0..k-1 (step one).
    Yields lists of (start_index, length).  Every segment covering the
    lowest live exponent must start there, which makes the recursion
    duplicate-free.
    """
    mults = list(mults)
    if not any(mults):
        yield []
        return
    e = next(i for i, m in enumerate(mults) if m > 0)
    count = mults[e]
    k = len(mults)
    max_len = 1
    while e + max_len < k and mults[e + max_len] > 0:
        max_len += 1

    def length_choices(remaining, max_allowed):
        """Nonincreasing length tuples for the `remaining` segments at e."""
        if remaining == 0:
            yield ()
            return
        for L in range(min(max_allowed, max_len), 0, -1):
            for rest in length_choices(remaining - 1, L):
                yield (L,) + rest

    for lens in length_choices(count, max_len):
        nxt = list(mults)
        ok = True
        for L in lens:
            for j in range(L):
                nxt[e + j] -= 1
                if nxt[e + j] < 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for rest in _run_multisegments(tuple(nxt)):
            yield [(e, L) for L in lens] + rest


def enumerate_multisegments(lam, modulus: int = 2):
    """All multisegments with the given infinitesimal multiset, listed in a
    closure-compatible order with the open orbit first.

    `lam` is an iterable of (unit, exp_x2) pairs.
    """
    runs = _lambda_lines(lam)
    per_run = []
    for unit, base, mults in runs:
        options = [
            [Segment(unit, base + 2 * e, L) for (e, L) in choice]
            for choice in _run_multisegments(mults)
        ]
        per_run.append(options)
    out = []
    for combo in itertools.product(*per_run) if per_run else [()]:
        segs = [s for part in combo for s in part]
        out.append(Multisegment(segs))
    return _closure_sort(out)


def count_multisegments(lam) -> int:
    """Independent counter used to cross-check the enumeration: recursion on
    the highest live exponent instead of the lowest."""

    def count_run(mults: tuple) -> int:
        mults = list(mults)
        if not any(mults):
            return 1
        e = max(i for i, m in enumerate(mults) if m > 0)
        count = mults[e]
        max_len = 1
        while e - max_len >= 0 and mults[e - max_len] > 0:
            max_len += 1

        total = 0

        def go(remaining, max_allowed, state):
            nonlocal total
            if remaining == 0:
                total += count_run(tuple(state))
                return
            for L in range(min(max_allowed, max_len), 0, -1):
                nxt = list(state)
                ok = True
                for j in range(L):
                    nxt[e - j] -= 1
                    if nxt[e - j] < 0:
                        ok = False
                        break
                if ok:
                    go(remaining - 1, L, nxt)

        base = list(mults)
        go(count, max_len, base)
        return total

    total = 1
    for _, _, mults in _lambda_lines(lam):
        total *= count_run(mults)
    return total


# -- closure order ------------------------------------------------------


def _rank_counts(m: Multisegment):
    """r_{ij}: for every (unit, [i, j]) interval, the number of segments of m
    containing it.  Only intervals with i < j matter for comparisons."""
    counts: dict[tuple, int] = {}
    for s in m.segments:
        exps = s.exponents_x2()
        for a in range(len(exps)):
            for b in range(a + 1, len(exps)):
                key = (s.unit, exps[a], exps[b])
                counts[key] = counts.get(key, 0) + 1
    return counts


def closure_leq(m1: Multisegment, m2: Multisegment) -> bool:
    """The orbit-closure partial order by rank matrices; the one-segment
    (open orbit) side is maximal, all-singletons minimal."""
    if m1.infinitesimal() != m2.infinitesimal():
        raise DifferentInfinitesimalError(
            f"{m1!r} and {m2!r} have different infinitesimal multisets"
        )
    r1, r2 = _rank_counts(m1), _rank_counts(m2)
    return all(v <= r2.get(k, 0) for k, v in r1.items())


def _canonical_key(m: Multisegment):
    return tuple((s.unit, s.start_x2, s.length) for s in m.segments)


def _closure_sort(ms):
    """Topological sort, maximal elements first, deterministic tie-break."""
    ms = sorted(set(ms), key=_canonical_key)
    remaining = list(ms)
    out = []
    while remaining:
        tops = [
            m
            for m in remaining
            if not any(
                other is not m and closure_leq(m, other) and not closure_leq(other, m)
                for other in remaining
            )
        ]
        tops.sort(key=_canonical_key)
        out.extend(tops)
        remaining = [m for m in remaining if m not in tops]
    return out


# -- block split ----------------------------------------------------------


@dataclass(frozen=True)
class BlockSplit:
    """The gamma-stable Levi data of an ordered multisegment.

    segments: the IndCond-ordered tuple; pairs: index pairs exchanged by the
    duality; core: indices of self-dual (central) segments; reported_core:
    core plus same-line symmetric pairs forming one tempered string;
    w_tilde: the permutation correcting gamma so it fixes the inducing
    character (identity when the core sits on a single line).
    """

    segments: tuple
    pairs: tuple
    core: tuple
    reported_core: tuple
    w_tilde: tuple


def langlands_block_split(
    m: Multisegment, modulus: int = 2, twisted: bool = True
) -> BlockSplit:
    segs = m.ordered_segments()
    k = len(segs)
    fixed = m.is_gamma_fixed(modulus)
    if twisted and not fixed:
        raise NotGammaFixedError(f"{m!r} is not gamma-fixed")

    duals = [s.dual(modulus) for s in segs]
    partner = [-1] * k
    used = [False] * k
    for i in range(k):
        if partner[i] >= 0:
            continue
        if duals[i] == segs[i]:
            partner[i] = i
            used[i] = True
            continue
        for j in range(k):
            if not used[j] and j != i and segs[j] == duals[i]:
                partner[i] = j
                partner[j] = i
                used[i] = used[j] = True
                break
        else:
            if twisted:
                raise NotGammaFixedError(f"no dual partner for {segs[i]!r}")
            partner[i] = -1

    core = tuple(i for i in range(k) if partner[i] == i)
    pairs = tuple(
        (i, partner[i]) for i in range(k) if 0 <= partner[i] != i and i < partner[i]
    )

    # reported core: absorb a same-line pair whose union is one consecutive
    # symmetric exponent string (the tempered-line reading of section 6.2)
    absorbed = set(core)
    for (i, j) in pairs:
        a, b = segs[i], segs[j]
        if a.unit != b.unit or (-a.unit) % modulus != a.unit:
            continue
        exps = sorted(a.exponents_x2() + b.exponents_x2())
        consecutive = all(exps[t + 1] - exps[t] == 2 for t in range(len(exps) - 1))
        symmetric = sorted(-e for e in exps) == exps
        if consecutive and symmetric:
            absorbed.add(i)
            absorbed.add(j)
    reported_core = tuple(sorted(absorbed))

    # gamma correction permutation: gamma rearranges the ordered blocks as
    # [dual(S_k), ..., dual(S_1)]; w_tilde sends each gamma-block back to the
    # slot of its equal segment so that w_tilde . gamma fixes the character.
    n = m.total
    offsets = []
    off = 0
    for s in segs:
        offsets.append(off)
        off += s.length
    w = [None] * n
    if fixed:
        taken = [False] * k
        pos = 0
        for jj in range(k):
            blk = duals[k - 1 - jj]  # the jj-th block of the gamma arrangement
            target = None
            for i in range(k):
                if not taken[i] and segs[i] == blk:
                    target = i
                    break
            if target is None:
                raise NotGammaFixedError("internal matching failure")
            taken[target] = True
            for t in range(blk.length):
                w[pos + t] = offsets[target] + t
            pos += blk.length
        w_tilde = tuple(w)
    else:
        w_tilde = tuple(range(n))
    return BlockSplit(segs, pairs, core, reported_core, w_tilde)


def gamma_fixed_multisegments(n: int, modulus: int = 2, exp_bound_x2: int = 4):
    """Every gamma-fixed multisegment of total size up to n with exponents
    in the symmetric window [-exp_bound_x2/2, exp_bound_x2/2].

    The desk-scale test family for the normalization comparison.
    """
    segs = [
        Segment(u, s, L)
        for u in range(modulus)
        for L in range(1, n + 1)
        for s in range(-exp_bound_x2, exp_bound_x2 + 1)
        if -exp_bound_x2 <= s + 2 * (L - 1) <= exp_bound_x2
    ]
    out = []
    seen = set()

    def go(start, remaining, acc):
        if acc:
            m = Multisegment(acc)
            if m not in seen and m.is_gamma_fixed(modulus):
                seen.add(m)
                out.append(m)
        for i in range(start, len(segs)):
            if segs[i].length <= remaining:
                go(i, remaining - segs[i].length, acc + [segs[i]])

    go(0, n, [])
    out.sort(key=lambda m: (m.total, _canonical_key(m)))
    return out


def enumerate_enhanced(lam, modulus: int = 2):
    """Enhanced parameters over a window, in closure order: gamma-fixed
    multisegments contribute (trivial, sign), non-fixed ones a single entry
    per gamma-orbit at its first occurrence."""
    ms = enumerate_multisegments(lam, modulus)
    seen = set()
    out = []
    for m in ms:
        if m in seen:
            continue
        if m.is_gamma_fixed(modulus):
            out.append(EnhancedParameter(m, "trivial"))
            out.append(EnhancedParameter(m, "sign"))
            seen.add(m)
        else:
            d = m.dual(modulus)
            out.append(EnhancedParameter(m, "none"))
            seen.add(m)
            if d.infinitesimal() == m.infinitesimal():
                seen.add(d)
    return out
