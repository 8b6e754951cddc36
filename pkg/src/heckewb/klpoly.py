"""Kazhdan-Lusztig polynomials for symmetric groups.

The classical recursion: for ws < w,

    P_{x,w} = q^{1-c} P_{xs,ws} + q^c P_{x,ws}
              - sum over x <= z < ws with zs < z of
                mu(z, ws) q^{(l(w)-l(z))/2} P_{x,z}

with c = 0 when xs < x and c = 1 otherwise, together with the standard
reduction P_{x,w} = P_{xs,w} when ws < w and xs > x.  Polynomials are
integer coefficient lists in ascending degree; an empty list is 0.
A persistent cache keyed by (n, x, w) makes window sweeps cheap.
"""

from __future__ import annotations

import hashlib
import json
import os
from functools import lru_cache

from heckewb.weyl import (
    Perm,
    all_perms,
    bruhat_leq,
    length,
    mult,
    simple_reflection,
)

__all__ = ["KLContext", "kl_polynomial", "kl_at_one"]


def _poly_add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_shift(a, k):
    if not a:
        return []
    return [0] * k + list(a)


def _poly_scale(a, c):
    if c == 0:
        return []
    return [c * x for x in a]


class KLContext:
    """Memoized Kazhdan-Lusztig computation with optional disk persistence.

    The cache file is JSON with a sha256 checksum of the payload; a corrupt
    or mismatched file is discarded and recomputed, never trusted.
    """

    def __init__(self, cache_path: str | None = None):
        self.cache: dict = {}
        self.cache_path = cache_path
        self._dirty = False
        if cache_path:
            self._load()

    # -- persistence -----------------------------------------------------

    @staticmethod
    def _key_str(x: Perm, w: Perm) -> str:
        return f"{len(x)}|{','.join(map(str, x))}|{','.join(map(str, w))}"

    def _load(self):
        if not self.cache_path or not os.path.exists(self.cache_path):
            return
        try:
            with open(self.cache_path, "r") as fh:
                blob = json.load(fh)
            payload = blob["entries"]
            digest = hashlib.sha256(
                json.dumps(payload, sort_keys=True).encode()
            ).hexdigest()
            if digest != blob.get("checksum"):
                return  # corrupt cache: recompute rather than trust it
            for k, coeffs in payload.items():
                self.cache[k] = list(coeffs)
        except (OSError, ValueError, KeyError):
            return

    def save(self):
        if not self.cache_path or not self._dirty:
            return
        payload = {k: v for k, v in self.cache.items()}
        digest = hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode()
        ).hexdigest()
        tmp = self.cache_path + ".tmp"
        os.makedirs(os.path.dirname(self.cache_path) or ".", exist_ok=True)
        with open(tmp, "w") as fh:
            json.dump({"checksum": digest, "entries": payload}, fh)
        os.replace(tmp, self.cache_path)
        self._dirty = False

    # -- recursion ---------------------------------------------------------

    def polynomial(self, x: Perm, w: Perm):
        """P_{x,w} as an ascending coefficient list ([] means 0)."""
        x, w = tuple(x), tuple(w)
        if len(x) != len(w):
            raise ValueError("permutations of different symmetric groups")
        if x == w:
            return [1]
        if not bruhat_leq(x, w):
            return []
        key = self._key_str(x, w)
        hit = self.cache.get(key)
        if hit is not None:
            return list(hit)
        n = len(w)
        # find a right descent of w
        s = None
        for i in range(n - 1):
            if w[i] > w[i + 1]:
                s = i
                break
        si = simple_reflection(s, n)
        ws = mult(w, si)
        xs = mult(x, si)
        if length(xs) > length(x):
            # P_{x,w} = P_{xs,w}; recurse with the raised x
            out = self.polynomial(xs, w)
            self.cache[key] = list(out)
            self._dirty = True
            return out
        # now xs < x and ws < w: the main recursion with mu corrections
        out = _poly_add(
            self.polynomial(xs, ws), _poly_shift(self.polynomial(x, ws), 1)
        )
        lw = length(w)
        for z in all_perms(n):
            lz = length(z)
            if lz >= length(ws):
                continue
            zi = mult(z, si)
            if length(zi) > lz:
                continue
            if not (bruhat_leq(x, z) and bruhat_leq(z, ws)):
                continue
            m = self.mu(z, ws)
            if m:
                term = _poly_scale(
                    _poly_shift(self.polynomial(x, z), (lw - lz) // 2), -m
                )
                out = _poly_add(out, term)
        self.cache[key] = list(out)
        self._dirty = True
        return out

    def mu(self, z: Perm, y: Perm) -> int:
        """The mu coefficient: coefficient of q^{(l(y)-l(z)-1)/2} in P_{z,y}."""
        d = length(y) - length(z)
        if d <= 0 or d % 2 == 0:
            return 0
        p = self.polynomial(z, y)
        idx = (d - 1) // 2
        return p[idx] if idx < len(p) else 0

    def at_one(self, x: Perm, w: Perm) -> int:
        return sum(self.polynomial(x, w))


_default_context = KLContext()


def kl_polynomial(x: Perm, w: Perm, context: KLContext | None = None):
    """P_{x,w} using the shared in-process cache by default."""
    return (context or _default_context).polynomial(x, w)


def kl_at_one(x: Perm, w: Perm, context: KLContext | None = None) -> int:
    return (context or _default_context).at_one(x, w)
