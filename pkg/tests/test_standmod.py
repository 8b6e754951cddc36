from fractions import Fraction

import pytest

from heckewb import linalg
from heckewb.kernels import mat_mul
from heckewb.params import Multisegment, NotGammaFixedError, Segment
from heckewb.standmod import (
    BadSpecializationError,
    MatrixModule,
    UnorderedSegmentsError,
    char_point,
    extend_by_gamma,
    induce_to_plus,
    induced_standard,
    unit_value,
)

Q = Fraction(3)


def test_steinberg_n2():
    st = Multisegment([Segment(0, -1, 2)])
    E = induced_standard(st, Q)
    assert E.dim == 1
    assert E.gens["T1"] == [[Fraction(-1)]]
    assert E.gens["th1"] == [[Fraction(1, 3)]]
    assert E.gens["th2"] == [[Fraction(3)]]
    assert E.relation_report() == []


def test_principal_series_n2():
    ps = Multisegment([Segment(0, 1, 1), Segment(0, -1, 1)])
    E = induced_standard(ps, Q)
    assert E.dim == 2
    assert E.relation_report() == []
    # theta eigenvalue multiset {(q, 1/q), (1/q, q)}: triangular matrices
    th1, th2 = E.gens["th1"], E.gens["th2"]
    assert sorted([th1[0][0], th1[1][1]]) == [Fraction(1, 3), Fraction(3)]
    assert th1[0][0] * th2[0][0] == 1


def test_trivial_n1():
    E = induced_standard(Multisegment([Segment(0, 0, 1)]), Q)
    assert E.dim == 1 and E.gens["th1"] == [[Fraction(1)]]


def test_bad_specialization():
    with pytest.raises(BadSpecializationError):
        induced_standard(Multisegment([Segment(0, 0, 1)]), Fraction(1))


def test_dimension_formula():
    m = Multisegment([Segment(0, 2, 2), Segment(0, 0, 1), Segment(0, -4, 2)])
    E = induced_standard(m, Q)
    assert E.dim == 120 // (2 * 1 * 2)  # 5!/(2!1!2!)
    assert E.relation_report() == []


def test_central_character_is_scalar():
    # elementary symmetric functions of the theta matrices act as scalars
    m = Multisegment([Segment(0, 1, 1), Segment(0, -1, 1)])
    E = induced_standard(m, Q)
    th = [E.gens["th1"], E.gens["th2"]]
    e1 = linalg.mat_add(th[0], th[1])
    e2 = mat_mul(th[0], th[1])
    for mat, val in ((e1, Fraction(3) + Fraction(1, 3)), (e2, Fraction(1))):
        assert mat == linalg.scalar_mat(val, E.dim)


def test_unit_values():
    assert unit_value(0, 2, Q) == 1
    assert unit_value(1, 2, Q) == -1
    assert unit_value(1, 4, Q) * unit_value(3, 4, Q) == 1
    assert unit_value(1, 4, Q) not in (1, -1)


def test_char_point():
    m = Multisegment([Segment(0, -1, 2)])
    assert char_point(m.ordered_segments(), Q, 2) == (Fraction(1, 3), Fraction(3))


def test_extend_by_gamma_rank1():
    m = Multisegment([Segment(0, 0, 1)])
    E = induced_standard(m, Q)
    for mode in ("whittaker", "geometric"):
        Eg = extend_by_gamma(E, m, mode)
        assert Eg.gens["Tg"] == [[Fraction(1)]]


def test_extend_by_gamma_steinberg_modes_agree():
    m = Multisegment([Segment(0, -1, 2)])
    E = induced_standard(m, Q)
    a = extend_by_gamma(E, m, "whittaker")
    b = extend_by_gamma(E, m, "geometric")
    assert a.gens["Tg"] == b.gens["Tg"]
    assert a.gens["Tg"][0][0] in (1, -1)


def test_extend_by_gamma_twist_relation():
    m = Multisegment([Segment(0, 1, 1), Segment(0, -1, 1)])
    E = induced_standard(m, Q)
    Eg = extend_by_gamma(E, m, "geometric")
    assert Eg.relation_report() == []
    # sign extension differs exactly by the sign of Tg
    Es = extend_by_gamma(E, m, "geometric", rho="sign")
    assert Es.gens["Tg"] == linalg.mat_scale(Eg.gens["Tg"], -1)
    assert Es.relation_report() == []


def test_extend_rejects_nonfixed():
    m = Multisegment([Segment(0, 2, 2)])
    E = induced_standard(m, Q)
    with pytest.raises(NotGammaFixedError):
        extend_by_gamma(E, m, "whittaker")


def test_induce_to_plus_blocks():
    m = Multisegment([Segment(0, 0, 1)])
    E = induced_standard(m, Q)
    P = induce_to_plus(E)
    assert P.dim == 2
    assert P.gens["Tg"] == [
        [Fraction(0), Fraction(1)],
        [Fraction(1), Fraction(0)],
    ]
    assert P.relation_report() == []


def test_induce_to_plus_restriction_blocks():
    # restriction back to the plain algebra is E + gamma*E: the plain
    # generators act block-diagonally with the twisted action below
    m = Multisegment([Segment(0, 2, 2)])
    E = induced_standard(m, Q)
    P = induce_to_plus(E)
    d = E.dim
    for label in ["T1"] + [f"th{j + 1}" for j in range(E.n)]:
        M = P.gens[label]
        for i in range(d):
            for j in range(d):
                assert M[i][d + j] == 0 and M[d + i][j] == 0
                assert M[i][j] == E.gens[label][i][j]
                assert M[d + i][d + j] == E.gamma_of_generator(label)[i][j]
    assert P.relation_report() == []


def test_induce_to_plus_rejects_twisted():
    m = Multisegment([Segment(0, 0, 1)])
    Eg = extend_by_gamma(induced_standard(m, Q), m, "whittaker")
    with pytest.raises(ValueError):
        induce_to_plus(Eg)


def test_gamma_twist_relation_on_constructed_modules():
    # T_gamma M(theta_y) T_gamma = M(theta_{gamma(y)}) on all generators
    for m in (
        Multisegment([Segment(0, -1, 2)]),
        Multisegment([Segment(0, 1, 1), Segment(0, -1, 1)]),
        Multisegment([Segment(0, 0, 1), Segment(1, 0, 1)]),
    ):
        E = induced_standard(m, Q)
        for mode in ("whittaker", "geometric"):
            Eg = extend_by_gamma(E, m, mode)
            G = Eg.gens["Tg"]
            for j in range(Eg.n):
                lhs = mat_mul(mat_mul(G, Eg.gens[f"th{j + 1}"]), G)
                assert lhs == Eg.gamma_of_generator(f"th{j + 1}")
