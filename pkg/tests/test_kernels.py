"""Differential tests: the compiled kernel twin must agree with the pure one."""

import random
from fractions import Fraction

import pytest

from heckewb import kernels
from heckewb.kernels import pykernels as pure

rng = random.Random(7)


def rmat(n, m, den=7):
    return [
        [Fraction(rng.randint(-9, 9), rng.randint(1, den)) for _ in range(m)]
        for _ in range(n)
    ]


def test_backend_reports_name():
    assert kernels.BACKEND in ("cython", "pure")


@pytest.mark.parametrize("trial", range(10))
def test_mat_mul_agrees(trial):
    A, B = rmat(5, 4), rmat(4, 6)
    assert kernels.mat_mul(A, B) == pure.mat_mul(A, B)


@pytest.mark.parametrize("trial", range(10))
def test_rref_and_nullspace_agree(trial):
    A = rmat(5, 7)
    r1, p1 = kernels.rref(A)
    r2, p2 = pure.rref(A)
    assert (r1, p1) == (r2, p2)
    assert kernels.nullspace(A) == pure.nullspace(A)
    # nullspace vectors really lie in the kernel
    for v in kernels.nullspace(A):
        assert all(x == 0 for x in kernels.mat_vec(A, v))


@pytest.mark.parametrize("trial", range(10))
def test_trace_and_vec_agree(trial):
    A, B = rmat(5, 5), rmat(5, 5)
    assert kernels.trace_mul(A, B) == pure.trace_mul(A, B)
    v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(5)]
    assert kernels.mat_vec(A, v) == pure.mat_vec(A, v)


def test_mat_inv():
    for _ in range(5):
        while True:
            A = rmat(4, 4)
            try:
                inv1 = kernels.mat_inv(A)
                break
            except ZeroDivisionError:
                continue
        assert pure.mat_inv(A) == inv1
        I = kernels.mat_mul(A, inv1)
        assert all(
            I[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4)
        )


def test_int_mat_mul_and_gram_agree():
    A = [[rng.randint(-20, 20) for _ in range(5)] for _ in range(5)]
    B = [[rng.randint(-20, 20) for _ in range(5)] for _ in range(5)]
    assert kernels.int_mat_mul(A, B) == pure.int_mat_mul(A, B)
    flats = [[rng.randint(-9, 9) for _ in range(16)] for _ in range(6)]
    assert kernels.int_gram(flats, 4) == pure.int_gram(flats, 4)
    # gram really is the trace form
    def unflat(f):
        return [f[i * 4 : (i + 1) * 4] for i in range(4)]

    G = kernels.int_gram(flats, 4)
    for i in range(6):
        for j in range(6):
            assert G[i][j] == kernels.trace_mul(
                [[Fraction(x) for x in row] for row in unflat(flats[i])],
                [[Fraction(x) for x in row] for row in unflat(flats[j])],
            )


def test_span_twins_agree():
    s1, s2 = kernels.Span(6), pure.Span(6)
    for _ in range(60):
        v = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(6)]
        assert s1.insert_residual(list(v)) == s2.insert_residual(list(v))
        assert list(s1.pivots) == list(s2.pivots)
        assert s1.rows() == s2.rows()
        w = [Fraction(rng.randint(-4, 4)) for _ in range(6)]
        assert s1.contains(list(w)) == s2.contains(list(w))
        assert s1.express(list(w)) == s2.express(list(w))


def test_span_express_reconstructs():
    sp = kernels.Span(5)
    vecs = []
    for _ in range(4):
        v = [Fraction(rng.randint(-4, 4)) for _ in range(5)]
        if sp.insert(list(v)):
            vecs.append(v)
    rows = sp.int_rows()
    target = [sum(Fraction(r[j]) for r in rows) for j in range(5)]
    co = sp.express(list(target))
    assert co is not None
    recon = [
        sum(c * Fraction(r[j]) for c, r in zip(co, rows)) for j in range(5)
    ]
    assert recon == target


def test_big_entries_fall_back_exactly():
    # entries beyond int64 must still be handled exactly
    big = 2**80
    sp = kernels.Span(3)
    assert sp.insert([Fraction(big), Fraction(1), Fraction(0)])
    assert sp.insert([Fraction(0), Fraction(big), Fraction(1)])
    assert sp.contains([Fraction(big * big), Fraction(big + big * big), Fraction(big)])
    A = [[Fraction(big), Fraction(1)], [Fraction(0), Fraction(big)]]
    inv = kernels.mat_inv(A)
    assert kernels.mat_mul(A, inv) == [
        [Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(1)],
    ]
