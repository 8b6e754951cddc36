"""Kazhdan-Lusztig multiplicities and (twisted) decomposition matrices.

Per cuspidal line and consecutive exponent run, a multisegment corresponds
to an orbit of the graded nilpotent variety; the recipe attaches to each
orbit a permutation whose Bruhat interval carries the orbit closure's local
intersection cohomology.  The permutation is built blockwise from the lace
counts: a segment [a, b] contributes one dot to every block (i, a+b-i) on
its antidiagonal, and the dots are arranged in the Bruhat-maximal pattern
(antidiagonal within block rows and columns).  Multiplicities are then KL
polynomial values at 1:

    mult(M(xi), E(zeta)) = prod over runs of P_{w(zeta_run), w(xi_run)}(1).

The recipe ships gated: results above the oracle threshold are served only
after the exhaustive small-rank validation against the brute-force module
decomposition has passed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from heckewb.klpoly import KLContext
from heckewb.params import (
    DifferentInfinitesimalError,
    EnhancedParameter,
    Multisegment,
    closure_leq,
    enumerate_enhanced,
    enumerate_multisegments,
    _lambda_lines,
)
from heckewb.weyl import bruhat_leq

__all__ = [
    "zelevinsky_permutation",
    "mult_untwisted",
    "mult_twisted",
    "MultiplicityTable",
    "decomposition_matrix",
    "RecipeUnvalidatedError",
    "OracleRequiredError",
    "KLRecipe",
    "validate_recipe",
]


class RecipeUnvalidatedError(RuntimeError):
    """The KL recipe has not passed oracle validation for this size."""


class OracleRequiredError(RuntimeError):
    """A twisted label-vs-label multiplicity needs the oracle but the
    module is above the configured threshold."""


def _run_lace_counts(segments, base_x2: int, k: int):
    """m[(a, b)] = number of segments equal to the interval [a, b] (block
    indices 0..k-1 within the run)."""
    m: dict = {}
    for s in segments:
        a = (s.start_x2 - base_x2) // 2
        b = a + s.length - 1
        m[(a, b)] = m.get((a, b), 0) + 1
    return m


def _strand_point(dims, laces):
    """The lace normal form: one basis slot per strand per covered block."""
    k = len(dims)
    slots = [0] * k
    maps = [
        [[Fraction(0)] * dims[i] for _ in range(dims[i + 1])] for i in range(k - 1)
    ]
    for (a, b), cnt in sorted(laces.items()):
        for _ in range(cnt):
            idx = {}
            for i in range(a, b + 1):
                idx[i] = slots[i]
                slots[i] += 1
            for i in range(a, b):
                maps[i][idx[i + 1]][idx[i]] = Fraction(1)
    return maps


def _unipotent_matrix(dims, maps):
    """I + N(x): identity blocks on the diagonal, x_i below it."""
    k = len(dims)
    n = sum(dims)
    offs = [0]
    for d in dims:
        offs.append(offs[-1] + d)
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(k):
        for t in range(dims[i]):
            M[offs[i] + t][offs[i] + t] = Fraction(1)
    for i in range(k - 1):
        for r in range(dims[i + 1]):
            for c in range(dims[i]):
                M[offs[i + 1] + r][offs[i] + c] = maps[i][r][c]
    return M


def _sw_profile(M, n):
    """Exact ranks of all bottom-left regions of M."""
    from heckewb.linalg import SpanBuilder

    R = [[0] * (n + 1) for _ in range(n + 1)]
    for a in range(1, n + 1):
        # incremental column insertion: column rank equals rank
        span = SpanBuilder(a)
        cols = list(zip(*M[n - a :]))
        for b in range(1, n + 1):
            span.insert(list(cols[b - 1]))
            R[a][b] = span.dim
    return R


_zel_cache: dict = {}


def zelevinsky_permutation(dims, laces):
    """The permutation of S_n (n = sum dims) attached to an orbit.

    Computed from the exact rank profile of the unipotent staircase matrix
    I + N(x) at a generic point of the orbit: the bottom-left rank function
    of a permutation matrix recovers the permutation by second differences,
    and at a generic orbit point that profile is the orbit invariant (the
    Bruhat position whose Kazhdan-Lusztig data carries the local
    intersection cohomology of the orbit closure).

    Genericity is realized by deterministic seeded rational conjugations;
    the profile must be a valid permutation profile attained by at least
    two independent samples, otherwise the computation refuses.  The
    shipped recipe is additionally validated exhaustively against the
    brute-force oracle at small rank before serving large windows.
    """
    import random
    import zlib

    dims = tuple(int(d) for d in dims)
    laces = {(int(a), int(b)): int(c) for (a, b), c in laces.items()}
    key = (dims, tuple(sorted(laces.items())))
    hit = _zel_cache.get(key)
    if hit is not None:
        return hit
    k = len(dims)
    n = sum(dims)
    base = _strand_point(dims, laces)
    seed = zlib.crc32(repr(key).encode())

    def conjugated(sample):
        rng = random.Random((seed, sample))
        from heckewb.kernels import mat_inv, mat_mul

        gs = []
        for d in dims:
            while True:
                g = [
                    [Fraction(rng.randint(-9, 9)) for _ in range(d)]
                    for _ in range(d)
                ]
                try:
                    mat_inv(g)
                    gs.append(g)
                    break
                except ZeroDivisionError:
                    continue
        ginv = [mat_inv(g) for g in gs]
        return [
            mat_mul(gs[i + 1], mat_mul(base[i], ginv[i])) for i in range(k - 1)
        ]

    profiles = []
    for sample in range(7):
        M = _unipotent_matrix(dims, conjugated(sample))
        profiles.append(_sw_profile(M, n))
        if len(profiles) >= 3:
            best = [
                [max(P[a][b] for P in profiles) for b in range(n + 1)]
                for a in range(n + 1)
            ]
            agree = sum(1 for P in profiles if P == best)
            if agree >= 2:
                break
    else:
        raise RecipeUnvalidatedError(
            "generic rank profile did not stabilize; refusing to guess"
        )
    dots = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            d = best[a][b] - best[a - 1][b] - best[a][b - 1] + best[a - 1][b - 1]
            if d == 1:
                dots.append((a - 1, b - 1))
            elif d != 0:
                raise RecipeUnvalidatedError("profile is not a permutation profile")
    if len(dots) != n:
        raise RecipeUnvalidatedError("profile is not a permutation profile")
    w = [None] * n
    for (a_from_bottom, b) in dots:
        w[n - 1 - a_from_bottom] = b
    out = tuple(w)
    _zel_cache[key] = out
    return out


def _run_permutation(m: Multisegment, unit: int, base_x2: int, mults):
    segs = [
        s
        for s in m.segments
        if s.unit == unit
        and base_x2 <= s.start_x2 <= base_x2 + 2 * (len(mults) - 1)
    ]
    laces = _run_lace_counts(segs, base_x2, len(mults))
    return zelevinsky_permutation(list(mults), laces)


@dataclass
class KLRecipe:
    """The multisegment-to-permutation strategy with its validation gate."""

    context: KLContext
    validated_rank: int = 0  # largest n for which oracle validation passed

    def multiplicity(self, xi: Multisegment, zeta: Multisegment) -> int:
        """mult(M(xi), E(zeta)): per-run product of KL values at 1."""
        if xi.infinitesimal() != zeta.infinitesimal():
            raise DifferentInfinitesimalError(
                "parameters have different infinitesimal multisets"
            )
        total = 1
        for unit, base, mults in _lambda_lines(xi.infinitesimal()):
            wx = _run_permutation(xi, unit, base, mults)
            wz = _run_permutation(zeta, unit, base, mults)
            if not bruhat_leq(wz, wx):
                return 0
            total *= self.context.at_one(wz, wx)
            if total == 0:
                return 0
        return total


_default_recipe = KLRecipe(KLContext())


def mult_untwisted(
    xi: Multisegment,
    zeta: Multisegment,
    recipe: KLRecipe | None = None,
    oracle_threshold: int | None = None,
) -> int:
    """Composition multiplicity of the irreducible of xi in the standard
    module of zeta.

    When the standard module is larger than the oracle threshold the call
    is refused unless the recipe has passed the exhaustive validation.
    """
    recipe = recipe or _default_recipe
    if oracle_threshold is not None:
        dim = _standard_dim(zeta)
        if dim > oracle_threshold and recipe.validated_rank < 4:
            raise RecipeUnvalidatedError(
                "recipe not validated; run validate_recipe first"
            )
    return recipe.multiplicity(xi, zeta)


def _standard_dim(m: Multisegment) -> int:
    import math

    n = m.total
    dim = math.factorial(n)
    for s in m.segments:
        dim //= math.factorial(s.length)
    return dim


def validate_recipe(
    q=Fraction(3),
    max_n: int = 4,
    max_window: int = 4,
    modulus: int = 2,
    recipe: KLRecipe | None = None,
    progress=None,
):
    """Exhaustive oracle validation of the KL recipe.

    For every single-line window of at most max_window consecutive exponents
    and every total rank <= max_n, compare the recipe against the brute
    force decomposition on all parameter pairs.  Marks the recipe validated
    on success; raises AssertionError with a counterexample otherwise.
    """
    from heckewb.oracle import WindowOracle

    recipe = recipe or _default_recipe
    q = Fraction(q)
    checked = 0
    for n in range(1, max_n + 1):
        for dims in _compositions(n, max_window):
            lam = []
            for i, d in enumerate(dims):
                lam.extend([(0, 2 * i)] * d)
            oracle = WindowOracle(lam, q, modulus)
            params = oracle.parameters
            for zeta in params:
                got = oracle.factors_of(zeta)
                for xi in params:
                    kl = recipe.multiplicity(xi, zeta)
                    orc = got.get(xi, 0)
                    if kl != orc:
                        raise AssertionError(
                            f"recipe disagrees with oracle: window {dims}, "
                            f"E({zeta!r}) : L({xi!r}) oracle={orc} recipe={kl}"
                        )
                    checked += 1
            if progress:
                progress(dims, checked)
    recipe.validated_rank = max(recipe.validated_rank, max_n)
    return checked


def _compositions(n: int, max_parts: int):
    """All tuples of positive ints summing to n with at most max_parts parts."""
    out = []

    def go(rem, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        if len(acc) == max_parts:
            return
        for d in range(1, rem + 1):
            go(rem - d, acc + [d])

    go(n, [])
    return out


def mult_twisted(
    xi: EnhancedParameter,
    zeta: EnhancedParameter,
    recipe: KLRecipe | None = None,
    modulus: int = 2,
    twisted_oracle=None,
    oracle_threshold: int | None = None,
) -> int:
    """Multiplicity of the twisted irreducible of xi in the twisted standard
    module of zeta.

    Case analysis: with at least one non-fixed side everything reduces to
    untwisted multiplicities by restriction bookkeeping; the genuinely
    twisted case (both parameters gamma-fixed, with component labels) is
    answered by the twisted oracle and never extrapolated.
    """
    recipe = recipe or _default_recipe
    mx, mz = xi.m, zeta.m
    xi_fixed = mx.is_gamma_fixed(modulus)
    zeta_fixed = mz.is_gamma_fixed(modulus)

    def m_untw(a, b):
        if a.infinitesimal() != b.infinitesimal():
            return 0
        return recipe.multiplicity(a, b)

    if not xi_fixed and not zeta_fixed:
        return m_untw(mx, mz) + m_untw(mx, mz.dual(modulus))
    if not xi_fixed and zeta_fixed:
        return m_untw(mx, mz)
    if xi_fixed and not zeta_fixed:
        return m_untw(mx, mz)
    # both fixed with labels: the rho-isotypic refinement
    if mx.infinitesimal() != mz.infinitesimal():
        return 0
    if twisted_oracle is None:
        raise OracleRequiredError(
            "label-vs-label twisted multiplicity needs the twisted oracle"
        )
    if oracle_threshold is not None and _standard_dim(mz) > oracle_threshold:
        raise OracleRequiredError(
            f"standard module dimension {_standard_dim(mz)} exceeds the "
            f"oracle threshold {oracle_threshold}"
        )
    return twisted_oracle.factors_of(zeta).get(xi, 0)


@dataclass
class MultiplicityTable:
    """A decomposition matrix: rows are standard modules, columns are
    irreducibles, both in closure order (open orbit first)."""

    lam: tuple
    twisted: bool
    params: list
    matrix: list

    def check_unitriangular(self, modulus: int = 2):
        """Diagonal 1; a nonzero entry forces row <= column in the closure
        order of the underlying multisegments."""
        def underlying(p):
            return p.m if isinstance(p, EnhancedParameter) else p

        for i, prow in enumerate(self.params):
            if self.matrix[i][i] != 1:
                raise AssertionError(f"diagonal entry at {i} is not 1")
            for j, pcol in enumerate(self.params):
                if self.matrix[i][j] == 0:
                    continue
                a, b = underlying(prow), underlying(pcol)
                if a.infinitesimal() == b.infinitesimal() and not closure_leq(a, b):
                    raise AssertionError(
                        f"nonzero entry ({i},{j}) violates the closure order"
                    )
        return True

    def to_json(self) -> dict:
        def param_json(p):
            if isinstance(p, EnhancedParameter):
                return p.to_json()
            return p.to_json()

        return {
            "lambda": [{"unit": u, "exp_x2": e} for (u, e) in self.lam],
            "twisted": self.twisted,
            "params": [param_json(p) for p in self.params],
            "order": "closure",
            "matrix": [list(row) for row in self.matrix],
        }

    def to_csv(self) -> str:
        lines = [",".join(str(x) for x in row) for row in self.matrix]
        return "\n".join(lines) + "\n"


def decomposition_matrix(
    lam,
    twisted: bool = False,
    q=Fraction(3),
    modulus: int = 2,
    recipe: KLRecipe | None = None,
    oracle_threshold: int | None = None,
    use_oracle_untwisted: bool = False,
) -> MultiplicityTable:
    """Enumerate parameters over the window and fill the multiplicity
    matrix; unitriangularity is asserted before returning."""
    recipe = recipe or _default_recipe
    lam = tuple(sorted(lam))
    q = Fraction(q)
    if not twisted:
        params = enumerate_multisegments(lam, modulus)
        if use_oracle_untwisted:
            from heckewb.oracle import WindowOracle

            oracle = WindowOracle(lam, q, modulus)
            params = oracle.parameters
            mat = oracle.decomposition_matrix()
        else:
            mat = []
            for zeta in params:
                row = []
                for xi in params:
                    row.append(
                        mult_untwisted(
                            xi, zeta, recipe, oracle_threshold=oracle_threshold
                        )
                    )
                mat.append(row)
        table = MultiplicityTable(lam, False, params, mat)
        table.check_unitriangular(modulus)
        return table

    params = enumerate_enhanced(lam, modulus)
    needs_oracle = any(
        z.rho != "none" for z in params
    ) and any(x.rho != "none" for x in params)
    toracle = None
    if needs_oracle:
        from heckewb.oracle import WindowOracle

        max_dim = max(_standard_dim(p.m) for p in params)
        if oracle_threshold is not None and max_dim > oracle_threshold:
            raise OracleRequiredError(
                f"twisted window needs the oracle on dimension {max_dim} > "
                f"threshold {oracle_threshold}"
            )
        toracle = WindowOracle(lam, q, modulus, twisted=True)
        params = toracle.parameters
    mat = []
    for zeta in params:
        row = []
        for xi in params:
            row.append(
                mult_twisted(
                    xi,
                    zeta,
                    recipe,
                    modulus,
                    twisted_oracle=toracle,
                    oracle_threshold=oracle_threshold,
                )
            )
        mat.append(row)
    table = MultiplicityTable(lam, True, params, mat)
    table.check_unitriangular(modulus)
    return table
