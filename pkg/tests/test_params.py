import itertools
import json

import pytest

from heckewb.params import (
    DifferentInfinitesimalError,
    EnhancedParameter,
    Multisegment,
    NotGammaFixedError,
    Segment,
    closure_leq,
    component_group,
    count_multisegments,
    enumerate_enhanced,
    enumerate_multisegments,
    gamma_dual,
    gamma_fixed_multisegments,
    langlands_block_split,
)


def test_enumerate_two_point_window():
    lam = [(0, -1), (0, 1)]
    ms = enumerate_multisegments(lam)
    assert len(ms) == 2
    assert len(ms[0].segments) == 1  # the open orbit first
    assert len(ms[1].segments) == 2


def test_enumerate_single_point():
    assert len(enumerate_multisegments([(0, 0)])) == 1


def test_distinct_lines_never_mix():
    ms = enumerate_multisegments([(0, 0), (1, 0)])
    assert len(ms) == 1
    assert len(ms[0].segments) == 2


def test_counts_match_independent_counter():
    windows = [
        [(0, 0)],
        [(0, -1), (0, 1)],
        [(0, 0), (0, 0), (0, 2), (0, 2)],
        [(0, 0), (0, 2), (0, 2), (0, 4)],
        [(0, 0), (0, 2), (0, 4), (0, 6)],
        [(0, 0), (0, 0), (0, 0), (0, 2)],
        [(0, 0), (1, 0), (0, 2)],
        [(0, 0), (0, 4)],  # gap: two runs
    ]
    for lam in windows:
        assert len(enumerate_multisegments(lam)) == count_multisegments(lam)


def test_gamma_dual_examples():
    assert gamma_dual(Multisegment([Segment(0, -1, 2)])) == Multisegment(
        [Segment(0, -1, 2)]
    )
    m = Multisegment([Segment(0, 2, 2)])  # [1, 2]
    assert gamma_dual(m) == Multisegment([Segment(0, -4, 2)])  # [-2, -1]


def test_gamma_dual_involution_on_enumerations():
    for lam in ([(0, -1), (0, 1)], [(0, -2), (0, 0), (0, 2)]):
        for m in enumerate_multisegments(lam):
            assert gamma_dual(gamma_dual(m)) == m


def test_closure_examples():
    lam = [(0, -1), (0, 1)]
    big, sing = enumerate_multisegments(lam)
    assert closure_leq(sing, big)
    assert not closure_leq(big, sing)
    assert closure_leq(big, big)


def test_closure_requires_same_infinitesimal():
    with pytest.raises(DifferentInfinitesimalError):
        closure_leq(
            Multisegment([Segment(0, 0, 1)]), Multisegment([Segment(0, 2, 1)])
        )


def test_closure_antisymmetry_small_windows():
    for lam in ([(0, 0), (0, 0), (0, 2), (0, 2)], [(0, 0), (0, 2), (0, 4), (0, 6)]):
        ms = enumerate_multisegments(lam)
        for a, b in itertools.combinations(ms, 2):
            assert not (closure_leq(a, b) and closure_leq(b, a))


def test_closure_unique_max_and_min():
    lam = [(0, 0), (0, 2), (0, 2), (0, 4)]
    ms = enumerate_multisegments(lam)
    maxes = [m for m in ms if all(closure_leq(o, m) for o in ms)]
    mins = [m for m in ms if all(closure_leq(m, o) for o in ms)]
    assert len(maxes) == 1 and len(mins) == 1
    assert all(s.length == 1 for s in mins[0].segments)


def test_gamma_preserves_closure():
    lam = [(0, -2), (0, 0), (0, 2)]
    ms = enumerate_multisegments(lam)
    for a in ms:
        for b in ms:
            assert closure_leq(a, b) == closure_leq(gamma_dual(a), gamma_dual(b))


def test_component_group():
    assert component_group(Multisegment([Segment(0, -1, 2)])) == "order2"
    assert component_group(Multisegment([Segment(0, 2, 2)])) == "trivial"
    for m in enumerate_multisegments([(0, -1), (0, 1)]):
        assert component_group(m) == "order2"
        assert component_group(gamma_dual(m)) == component_group(m)


def test_block_split_three_blocks():
    m = Multisegment([Segment(0, 2, 2), Segment(0, 0, 1), Segment(0, -4, 2)])
    sp = langlands_block_split(m)
    assert [s.center_x2 for s in sp.segments] == [3, 0, -3]
    assert sp.core == (1,)
    assert sp.pairs == ((0, 2),)


def test_block_split_single_selfdual():
    sp = langlands_block_split(Multisegment([Segment(0, -1, 2)]))
    assert sp.core == (0,)
    assert sp.pairs == ()


def test_block_split_halfinteger_pair_reported_as_core():
    # {[1/2],[-1/2]} forms one tempered line: reported core absorbs the pair
    sp = langlands_block_split(
        Multisegment([Segment(0, 1, 1), Segment(0, -1, 1)])
    )
    assert sp.pairs == ((0, 1),)
    assert sp.reported_core == (0, 1)


def test_block_split_rejects_nonfixed():
    with pytest.raises(NotGammaFixedError):
        langlands_block_split(Multisegment([Segment(0, 2, 2)]))


def test_enhanced_enumeration_labels():
    en = enumerate_enhanced([(0, -1), (0, 1)])
    assert [e.rho for e in en] == ["trivial", "sign", "trivial", "sign"]
    # a window with a non-fixed orbit pair appears once with rho = none
    en3 = enumerate_enhanced([(0, -2), (0, 0), (0, 2)])
    rhos = [e.rho for e in en3]
    assert rhos.count("none") == 1  # the {[-1,0],[1]} ~ {[0,1],[-1]} orbit
    assert rhos.count("trivial") == rhos.count("sign") == 2


def test_enhanced_validate():
    m = Multisegment([Segment(0, -1, 2)])
    EnhancedParameter(m, "trivial").validate(2)
    with pytest.raises(ValueError):
        EnhancedParameter(m, "none").validate(2)
    m2 = Multisegment([Segment(0, 2, 2)])
    with pytest.raises(ValueError):
        EnhancedParameter(m2, "sign").validate(2)


def test_json_roundtrip():
    m = Multisegment([Segment(0, -1, 2), Segment(1, 0, 1)])
    blob = json.dumps(m.to_json())
    assert Multisegment.from_json(json.loads(blob)) == m


def test_gamma_fixed_family_contains_key_cases():
    fam = gamma_fixed_multisegments(3)
    assert Multisegment([Segment(0, -1, 2)]) in fam
    assert Multisegment(
        [Segment(0, 2, 1), Segment(0, 0, 1), Segment(0, -2, 1)]
    ) in fam
    assert all(m.is_gamma_fixed(2) for m in fam)
