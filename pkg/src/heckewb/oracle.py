"""Brute-force module decomposition: the ground truth for multiplicities.

Given a matrix module M, the oracle computes the algebra A generated by the
generator actions, its radical as the kernel of the module trace form
(characteristic zero), the radical filtration of M, and the isotypic pieces
of each semisimple layer through the central idempotents of the layer
endomorphism algebra.  Simple factors are identified by exact character
fingerprints and matched against reference simples (cosocles of the window's
standard modules); any ambiguity raises instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from heckewb import linalg
from heckewb.kernels import int_gram, int_mat_mul, mat_mul, mat_vec, nullspace, rref, trace_mul
from heckewb.linalg import SpanBuilder
from heckewb.params import (
    EnhancedParameter,
    Multisegment,
    enumerate_enhanced,
    enumerate_multisegments,
)
from heckewb.standmod import (
    MatrixModule,
    extend_by_gamma,
    induce_to_plus,
    induced_standard,
)
from heckewb.weyl import all_perms, reduced_word

__all__ = [
    "LabelMatchFailureError",
    "NotUniqueQuotientError",
    "decompose_layers",
    "cosocle",
    "WindowOracle",
]


class LabelMatchFailureError(RuntimeError):
    """A simple factor could not be matched to a unique enumerated parameter."""


class NotUniqueQuotientError(RuntimeError):
    """The module head is not a single simple (unordered inducing data)."""


# -- algebra closure and radical -----------------------------------------


def _generator_mats(M: MatrixModule, for_closure: bool = False):
    gens = [M.gens[f"T{i + 1}"] for i in range(M.n - 1)]
    if for_closure:
        # theta_{e_2}, ..., theta_{e_n} lie in the algebra generated by the
        # T_i and theta_{e_1} (Bernstein relation plus invertibility of T),
        # so a smaller generating set saturates the same closure.
        gens += [M.gens["th1"]]
        if M.n == 1:
            gens = [M.gens["th1"]]
    else:
        gens += [M.gens[f"th{j + 1}"] for j in range(M.n)]
    if M.has_gamma():
        gens.append(M.gens["Tg"])
    return gens


def algebra_closure(M: MatrixModule):
    """A basis of the unital algebra generated by the generator actions.

    Everything runs on primitive integer matrices (the span is scale
    invariant); breadth-first over words keeps the products short.
    """
    from collections import deque

    d = M.dim
    gens = []
    for g in _generator_mats(M, for_closure=True):
        flat = linalg.primitive(linalg.flatten(g))
        gens.append([[int(x) for x in flat[i * d : (i + 1) * d]] for i in range(d)])
    span = SpanBuilder(d * d)
    basis = []
    eye = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    queue = deque([eye])
    full = d * d
    while queue:
        cand = queue.popleft()
        flat = [x for row in cand for x in row]
        if not any(flat):
            continue
        res = span.insert_residual(flat)
        if res is None:
            continue
        # the residual spans the same algebra and keeps the entries small,
        # so products are taken against it rather than the raw word
        prim = [res[i * d : (i + 1) * d] for i in range(d)]
        basis.append(prim)
        if span.dim == full:
            return basis, True
        for g in gens:
            queue.append(int_mat_mul(g, prim))
    return basis, span.dim == full


def radical_basis(basis):
    """rad(A) as the kernel of the trace form (a, b) -> tr(ab) on a faithful
    module; valid in characteristic zero.  Basis matrices are integer."""
    if not basis:
        return []
    d = len(basis[0])
    flats = [[x for row in B for x in row] for B in basis]
    gram = int_gram(flats, d)
    combos = linalg.nullspace_fast(gram)
    rad = []
    for c in combos:
        m = [[Fraction(0)] * d for _ in range(d)]
        for coef, B in zip(c, basis):
            if coef:
                for i in range(d):
                    Bi = B[i]
                    mi = m[i]
                    for j in range(d):
                        if Bi[j]:
                            mi[j] += coef * Bi[j]
        flat = linalg.primitive(linalg.flatten(m))
        rad.append([[int(x) for x in flat[i * d : (i + 1) * d]] for i in range(d)])
    return rad


# -- subspaces and quotients ---------------------------------------------


class _Subspace:
    """A subspace of Q^d held as an echelon span."""

    def __init__(self, d: int, vectors=()):
        self.d = d
        self.span = SpanBuilder(d)
        for v in vectors:
            self.span.insert(v)

    @property
    def dim(self):
        return self.span.dim

    def rows(self):
        return self.span.int_rows

    def contains(self, v) -> bool:
        return self.span.contains(v)


def _image_subspace(mats, vectors, d):
    sub = _Subspace(d)
    for A in mats:
        for v in vectors:
            sub.span.insert(linalg.primitive(mat_vec(A, v)))
    return sub


@dataclass
class _Layer:
    """A semisimple layer S_k/S_{k+1} with generator actions in layer
    coordinates plus the lift/project maps used for traces."""

    dim: int
    gens: dict
    reps: list  # representative vectors in the ambient module
    project: callable  # ambient vector -> layer coordinates


def _quotient_layer(M: MatrixModule, upper: _Subspace, lower: _Subspace) -> _Layer:
    """The layer upper/lower with the induced generator action.

    A combined span is built from the lower rows followed by the upper rows
    whose pivots are not pivots of the lower space (pivot sets of nested
    spaces are nested); the latter represent a basis of the quotient, and
    express() against the combined span computes quotient coordinates.
    """
    lower_pivots = set(lower.span.pivots)
    comb = SpanBuilder(M.dim)
    for row in lower.span.int_rows:
        comb.insert(row)
    reps = []
    rep_slots = []
    for row, piv in zip(upper.span.int_rows, upper.span.pivots):
        if piv in lower_pivots:
            continue
        res = comb.insert_residual(row)
        if res is None:
            raise ArithmeticError("upper row dependent on lower space")
        reps.append(res)
        rep_slots.append(comb.dim - 1)
    ldim = len(reps)

    def project(vec):
        co = comb.express(vec)
        if co is None:
            raise ArithmeticError("vector not in the layer span")
        return [co[t] for t in rep_slots]

    gens = {}
    for label, A in M.gens.items():
        cols = [project(mat_vec(A, r)) for r in reps]
        gens[label] = linalg.transpose(cols)
    return _Layer(dim=ldim, gens=gens, reps=reps, project=project)


def _layer_module(M: MatrixModule, layer: _Layer) -> MatrixModule:
    return MatrixModule(
        n=M.n,
        q=M.q,
        dim=layer.dim,
        gens=layer.gens,
        basis_tags=tuple(range(layer.dim)),
        modulus=M.modulus,
        segments=M.segments,
        point=M.point,
    )


# -- semisimple layer decomposition ---------------------------------------


def _theta_blocks(R: MatrixModule):
    """Split the space into joint generalized theta-eigen blocks.

    Returns a list of basis matrices (lists of column vectors).
    """
    d = R.dim
    blocks = [[ _unit_vec(i, d) for i in range(d) ]]
    values = sorted(set(R.point), key=lambda f: (f.numerator, f.denominator))
    if not values:
        return blocks
    for j in range(R.n):
        A = R.gens[f"th{j + 1}"]
        new_blocks = []
        for B in blocks:
            if len(B) == 1:
                new_blocks.append(B)
                continue
            # restrict A to the block
            Arest = _restrict(A, B)
            k = len(B)
            found = []
            covered = 0
            for c in values:
                N = linalg.mat_sub(Arest, linalg.scalar_mat(c, k))
                Nk = linalg.mat_pow(N, k)
                ker = nullspace(Nk)
                if ker:
                    vecs = [_combine(B, co) for co in ker]
                    found.append(vecs)
                    covered += len(ker)
            if covered != k:
                # eigenvalue outside the expected set; keep block whole
                new_blocks.append(B)
            else:
                new_blocks.extend(found)
        blocks = new_blocks
    return blocks


def _unit_vec(i, d):
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return v


def _restrict(A, B):
    """Matrix of A on span(B) in B-coordinates; B must be A-stable."""
    cols = linalg.transpose(B)  # columns are the basis vectors
    out_cols = []
    for b in B:
        img = mat_vec(A, b)
        co = linalg.solve(cols, img)
        if co is None:
            raise ArithmeticError("subspace is not stable")
        out_cols.append(co)
    return linalg.transpose(out_cols)


def _combine(B, coords):
    d = len(B[0])
    v = [Fraction(0)] * d
    for c, b in zip(coords, B):
        if c:
            v = [a + c * x for a, x in zip(v, b)]
    return v


def _endomorphisms(R: MatrixModule):
    """A basis of End_A(R) via theta-block-diagonal unknowns."""
    d = R.dim
    blocks = _theta_blocks(R)
    # unknowns: one matrix entry per (block, i, j)
    slots = []
    for bi, B in enumerate(blocks):
        k = len(B)
        for i in range(k):
            for j in range(k):
                slots.append((bi, i, j))
    n_unk = len(slots)
    basis_X = []
    for (bi, i, j) in slots:
        B = blocks[bi]
        X = linalg.zeros(d, d)
        col = B[j]
        row_vec = B[i]
        # X = row_i-image: maps b_j -> b_i within the block, 0 elsewhere:
        # need dual functionals; use projections via block coordinates
        basis_X.append((bi, i, j))
    # Build X matrices with dual coordinates: express the projection onto
    # each block basis vector.
    allvecs = [v for B in blocks for v in B]
    Vcols = linalg.transpose(allvecs)
    Vinv = None
    try:
        from heckewb.kernels import mat_inv

        Vinv = mat_inv(Vcols)
    except ZeroDivisionError:
        raise ArithmeticError("theta blocks do not span")
    offsets = []
    off = 0
    for B in blocks:
        offsets.append(off)
        off += len(B)
    mats = []
    for (bi, i, j) in slots:
        # E_{ij} on block bi in the block basis, conjugated back
        E = linalg.zeros(d, d)
        gi = offsets[bi] + i
        gj = offsets[bi] + j
        E[gi][gj] = Fraction(1)
        X = mat_mul(Vcols, mat_mul(E, Vinv))
        mats.append(X)
    # impose commutation with every generator
    gen_list = list(R.gens.values())
    rows = []
    for g in gen_list:
        comms = [
            linalg.flatten(linalg.mat_sub(mat_mul(X, g), mat_mul(g, X)))
            for X in mats
        ]
        # each coordinate of the commutator gives one linear constraint
        for coord in range(d * d):
            row = [comms[t][coord] for t in range(n_unk)]
            if any(row):
                rows.append(row)
    if rows:
        combos = linalg.nullspace_fast(rows)
    else:
        combos = [_unit_vec(t, n_unk) for t in range(n_unk)]
    out = []
    for co in combos:
        X = linalg.zeros(d, d)
        for c, Xb in zip(co, mats):
            if c:
                X = linalg.mat_add(X, linalg.mat_scale(Xb, c))
        out.append(X)
    return out


def _minpoly(A):
    """Monic minimal polynomial coefficients [c_0, ..., c_{k-1}, 1]."""
    d = len(A)
    span = SpanBuilder(d * d)
    powers = [linalg.identity(d)]
    span.insert(linalg.flatten(powers[0]))
    cur = powers[0]
    while True:
        cur = mat_mul(cur, A)
        flat = linalg.flatten(cur)
        if not span.insert(flat):
            coords = span.coords_in_original(flat)
            return [-c for c in coords] + [Fraction(1)]
        powers.append(cur)


def _rational_roots(coeffs):
    """All rational roots of the polynomial with Fraction coefficients.

    The minimal polynomials here are squarefree products of linear factors
    when the layer splits; a nonsplit factor surfaces as a root shortfall.
    """
    try:
        from sympy import Poly, Rational, symbols

        x = symbols("x")
        poly = Poly(
            sum(Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(coeffs)),
            x,
        )
        roots = []
        for r, mult in poly.ground_roots().items():
            rr = Rational(r)
            roots.extend([Fraction(int(rr.p), int(rr.q))] * mult)
        return roots
    except ImportError:  # pragma: no cover - sympy is a declared dependency
        raise RuntimeError("sympy is required for central idempotents")


@dataclass
class SimpleFactor:
    dim: int
    multiplicity: int
    projector: list  # idempotent matrix on the layer
    layer: object = None  # the layer module the projector lives on

    def fingerprint(self, family) -> tuple:
        return (self.dim,) + _char_values(
            self.layer, family, projector=self.projector, scale=self.multiplicity
        )


def _char_family(n: int, twisted: bool, level: int = 0):
    """A deterministic family of algebra words for character fingerprints."""
    fam = []
    perms = all_perms(n)
    lattice = [tuple(0 for _ in range(n))]
    for j in range(n):
        e = tuple(1 if t == j else 0 for t in range(n))
        lattice.append(e)
        lattice.append(tuple(-x for x in e))
    if level >= 1:
        for a in range(n):
            for b in range(a, n):
                y = [0] * n
                y[a] += 1
                y[b] += 1
                lattice.append(tuple(y))
    if level >= 2:
        for a in range(n):
            for b in range(n):
                y = [0] * n
                y[a] += 1
                y[b] -= 1
                if any(y):
                    lattice.append(tuple(y))
    eps_range = (0, 1) if twisted else (0,)
    for eps in eps_range:
        for w in perms:
            for y in lattice:
                fam.append((w, y, eps))
    return fam


def _char_values(R: MatrixModule, family, projector=None, scale=1):
    """Traces of the family words, optionally cut by an idempotent."""
    Tw_cache = {}
    vals = []
    for (w, y, eps) in family:
        A = Tw_cache.get(w)
        if A is None:
            A = R.perm_matrix(w)
            Tw_cache[w] = A
        B = mat_mul(A, R.theta_matrix(y)) if any(y) else A
        if eps:
            B = mat_mul(B, R.gens["Tg"])
        if projector is not None:
            t = trace_mul(B, projector)
        else:
            t = linalg.trace(B)
        vals.append(t / scale)
    return tuple(vals)


def _split_layer(R: MatrixModule):
    """Isotypic decomposition of a semisimple layer; returns SimpleFactors."""
    if R.dim == 0:
        return []
    E = _endomorphisms(R)
    # center of E
    k = len(E)
    span = SpanBuilder(R.dim * R.dim)
    for X in E:
        span.insert(linalg.flatten(X))
    rows = []
    for X in E:
        comms = [
            linalg.flatten(linalg.mat_sub(mat_mul(Z, X), mat_mul(X, Z))) for Z in E
        ]
        for coord in range(R.dim * R.dim):
            row = [comms[t][coord] for t in range(k)]
            if any(row):
                rows.append(row)
    if rows:
        combos = linalg.nullspace_fast(rows)
    else:
        combos = [_unit_vec(t, k) for t in range(k)]
    Z_basis = []
    for co in combos:
        Zm = linalg.zeros(R.dim, R.dim)
        for c, X in zip(co, E):
            if c:
                Zm = linalg.mat_add(Zm, linalg.mat_scale(X, c))
        Z_basis.append(Zm)
    r = len(Z_basis)
    # generic central element: deterministic small weights with retry
    for attempt in range(1, 8):
        z = linalg.zeros(R.dim, R.dim)
        for t, Zm in enumerate(Z_basis):
            z = linalg.mat_add(z, linalg.mat_scale(Zm, Fraction(attempt) ** t + t + 1))
        mp = _minpoly(z)
        if len(mp) - 1 == r:
            break
    else:
        raise LabelMatchFailureError("no generic central element found")
    roots = _rational_roots(mp)
    if len(roots) != r or len(set(roots)) != r:
        raise LabelMatchFailureError(
            "central minimal polynomial does not split over Q"
        )
    factors = []
    I = linalg.identity(R.dim)
    for lam in roots:
        # Lagrange idempotent for this eigenvalue
        e = I
        for mu in roots:
            if mu == lam:
                continue
            e = mat_mul(
                e,
                linalg.mat_scale(
                    linalg.mat_sub(z, linalg.scalar_mat(mu, R.dim)),
                    1 / (lam - mu),
                ),
            )
        iso_dim = linalg.rank(e)
        # multiplicity^2 = dim of e E e
        span_e = SpanBuilder(R.dim * R.dim)
        for X in E:
            span_e.insert(linalg.flatten(mat_mul(e, mat_mul(X, e))))
        m2 = span_e.dim
        mult = math.isqrt(m2)
        if mult * mult != m2:
            raise LabelMatchFailureError("endomorphism block is not split")
        if iso_dim % mult:
            raise LabelMatchFailureError("isotypic dimension bookkeeping failed")
        sdim = iso_dim // mult
        factors.append(
            SimpleFactor(dim=sdim, multiplicity=mult, projector=e, layer=R)
        )
    return factors


@dataclass
class ModuleAnalysis:
    """Everything the oracle extracts from one module in one pass.

    The expensive part (closure, radical filtration, layer splitting) is
    computed once; character fingerprints are evaluated lazily for whatever
    word family the caller is using.
    """

    dim: int
    n_layers: int
    factors: list  # SimpleFactor across all layers
    head_factors: list  # SimpleFactor list of the top layer
    head_module: MatrixModule | None  # the head, when it is simple
    head_projection: list | None  # matrix rows projecting M onto the head

    def counts(self, family) -> dict:
        """fingerprint -> (multiplicity, simple dim), layers accumulated."""
        out: dict[tuple, tuple] = {}
        for f in self.factors:
            fp = f.fingerprint(family)
            mult, _ = out.get(fp, (0, f.dim))
            out[fp] = (mult + f.multiplicity, f.dim)
        return out


def analyze_module(M: MatrixModule) -> ModuleAnalysis:
    """Radical filtration of M with every layer split into simples."""
    d = M.dim
    basis, saturated = algebra_closure(M)
    if saturated:
        factor = SimpleFactor(
            dim=d, multiplicity=1, projector=linalg.identity(d), layer=M
        )
        return ModuleAnalysis(
            dim=d,
            n_layers=1,
            factors=[factor],
            head_factors=[factor],
            head_module=M,
            head_projection=linalg.identity(d),
        )
    rad = radical_basis(basis)
    full = _Subspace(d, [_unit_vec(i, d) for i in range(d)])
    chain = [full]
    while chain[-1].dim > 0:
        nxt = _image_subspace(rad, chain[-1].rows(), d) if rad else _Subspace(d)
        if nxt.dim == chain[-1].dim:
            raise ArithmeticError("radical filtration did not descend")
        chain.append(nxt)
        if nxt.dim == 0:
            break
    n_layers = len(chain) - 1
    all_factors = []
    head_factors = None
    head_module = None
    head_projection = None
    for k in range(n_layers):
        layer = _quotient_layer(M, chain[k], chain[k + 1])
        R = _layer_module(M, layer)
        factors = _split_layer(R)
        if k == 0:
            head_factors = factors
            if len(factors) == 1 and factors[0].multiplicity == 1:
                head_module = R
                proj = [layer.project(_unit_vec(i, d)) for i in range(d)]
                head_projection = linalg.transpose(proj)
        all_factors.extend(factors)
    total = sum(f.multiplicity * f.dim for f in all_factors)
    if total != d:
        raise ArithmeticError(f"dimension bookkeeping failed: {total} != {d}")
    return ModuleAnalysis(
        dim=d,
        n_layers=n_layers,
        factors=all_factors,
        head_factors=head_factors,
        head_module=head_module,
        head_projection=head_projection,
    )


def decompose_layers(M: MatrixModule, family=None):
    if family is None:
        family = _char_family(M.n, M.has_gamma())
    a = analyze_module(M)
    return a.n_layers, a.counts(family)


def cosocle(M: MatrixModule, family=None):
    """The head M / rad(A) M; raises NotUniqueQuotientError when it is not
    simple.  Returns (quotient module, projection rows)."""
    a = analyze_module(M)
    if a.head_module is None:
        raise NotUniqueQuotientError(
            f"head has {len(a.head_factors)} isotypic pieces"
        )
    return a.head_module, a.head_projection


# -- window-level oracle ----------------------------------------------------


class WindowOracle:
    """References and decompositions for one infinitesimal window.

    For every enumerated parameter the reference simple is built as the
    cosocle of its standard module (extended by T_gamma in the twisted
    case); composition series of arbitrary modules over the window are then
    matched against those references by exact character fingerprints.  Each
    standard module is analyzed exactly once.
    """

    def __init__(self, lam, q, modulus: int = 2, twisted: bool = False):
        self.lam = tuple(sorted(lam))
        self.q = Fraction(q)
        self.modulus = modulus
        self.twisted = twisted
        self.level = 0
        self.family = _char_family(self._rank(), twisted, level=0)
        self._analyses: dict = {}
        self._build_references()

    def _rank(self):
        return len(self.lam)

    def standard_module(self, param) -> MatrixModule:
        if not self.twisted:
            return induced_standard(param, self.q, self.modulus)
        m, rho = param.m, param.rho
        E = induced_standard(m, self.q, self.modulus)
        if rho == "none":
            return induce_to_plus(E)
        return extend_by_gamma(E, m, "geometric", rho=rho)

    def analysis(self, param) -> ModuleAnalysis:
        a = self._analyses.get(param)
        if a is None:
            a = analyze_module(self.standard_module(param))
            self._analyses[param] = a
        return a

    def _reference_module(self, param) -> MatrixModule:
        # the head of Ind E(m) is Ind of the head for non-fixed parameters,
        # so one code path covers both the plain and the twisted case
        a = self.analysis(param)
        if a.head_module is None:
            raise NotUniqueQuotientError(
                f"standard module of {param!r} has a non-simple head"
            )
        return a.head_module

    def _build_references(self):
        if self.twisted:
            self.parameters = enumerate_enhanced(self.lam, self.modulus)
        else:
            self.parameters = enumerate_multisegments(self.lam, self.modulus)
        self._refs = [self._reference_module(p) for p in self.parameters]
        while True:
            self.fingerprints = {}
            collision = False
            for param, R in zip(self.parameters, self._refs):
                fp = (R.dim,) + _char_values(R, self.family)
                if fp in self.fingerprints:
                    collision = True
                    break
                self.fingerprints[fp] = param
            if not collision:
                return
            self.level += 1
            if self.level > 2:
                raise LabelMatchFailureError(
                    "reference fingerprints collide at every family level"
                )
            self.family = _char_family(self._rank(), self.twisted, self.level)

    def _match_counts(self, counts):
        out = {}
        for fp, (mult, _sdim) in counts.items():
            param = self.fingerprints.get(fp)
            if param is None:
                raise LabelMatchFailureError(
                    "a factor matches no enumerated parameter"
                )
            out[param] = out.get(param, 0) + mult
        return out

    def composition_factors(self, M: MatrixModule):
        """Multiset {parameter: multiplicity} of the simple factors of M."""
        a = analyze_module(M)
        return self._match_counts(a.counts(self.family))

    def factors_of(self, param):
        """Composition factors of the standard module of param (cached)."""
        return self._match_counts(self.analysis(param).counts(self.family))

    def decomposition_matrix(self):
        """rows = standard modules, columns = simples, in parameter order."""
        idx = {p: i for i, p in enumerate(self.parameters)}
        size = len(self.parameters)
        mat = [[0] * size for _ in range(size)]
        for i, p in enumerate(self.parameters):
            for param, mult in self.factors_of(p).items():
                mat[i][idx[param]] = mult
        return mat
