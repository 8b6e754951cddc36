import json
import os

from heckewb.klpoly import KLContext, kl_at_one, kl_polynomial
from heckewb.weyl import all_perms, bruhat_leq, inverse, length


def test_diagonal_is_one():
    ctx = KLContext()
    for w in all_perms(3):
        assert ctx.polynomial(w, w) == [1]


def test_s3_all_trivial():
    ctx = KLContext()
    for x in all_perms(3):
        for w in all_perms(3):
            expected = [1] if bruhat_leq(x, w) else []
            assert ctx.polynomial(x, w) == expected


def test_s4_first_nontrivial_value():
    # P_{s2, s2 s1 s3 s2} = 1 + q (0-indexed one-line forms)
    ctx = KLContext()
    assert ctx.polynomial((0, 2, 1, 3), (2, 3, 0, 1)) == [1, 1]


def test_s4_full_catalogue():
    # the nontrivial entries of S4 sit exactly over the two singular
    # Schubert varieties
    ctx = KLContext()
    nontrivial = set()
    for x in all_perms(4):
        for w in all_perms(4):
            if bruhat_leq(x, w) and ctx.polynomial(x, w) != [1]:
                nontrivial.add((x, w))
    assert nontrivial == {
        ((0, 1, 2, 3), (2, 3, 0, 1)),
        ((0, 2, 1, 3), (2, 3, 0, 1)),
        ((0, 1, 2, 3), (3, 1, 2, 0)),
        ((0, 1, 3, 2), (3, 1, 2, 0)),
        ((1, 0, 2, 3), (3, 1, 2, 0)),
        ((1, 0, 3, 2), (3, 1, 2, 0)),
    }


def test_symmetry_and_short_intervals():
    ctx = KLContext()
    for x in all_perms(4):
        for w in all_perms(4):
            if not bruhat_leq(x, w):
                continue
            p = ctx.polynomial(x, w)
            assert p == ctx.polynomial(inverse(x), inverse(w))
            if length(w) - length(x) <= 2:
                assert p == [1]
            assert p[0] == 1  # constant term 1
            deg_bound = (length(w) - length(x) - 1) // 2
            assert len(p) - 1 <= max(deg_bound, 0)


def test_kl_at_one():
    assert kl_at_one((0, 1, 2, 3), (2, 3, 0, 1)) == 2


def test_cache_persistence_and_checksum(tmp_path):
    path = os.path.join(tmp_path, "kl.json")
    ctx = KLContext(path)
    ctx.polynomial((0, 2, 1, 3), (2, 3, 0, 1))
    ctx.save()
    fresh = KLContext(path)
    key = KLContext._key_str((0, 2, 1, 3), (2, 3, 0, 1))
    assert fresh.cache[key] == [1, 1]
    # corrupt the payload: the checksum must reject it silently
    with open(path) as fh:
        blob = json.load(fh)
    blob["entries"][key] = [9, 9]
    with open(path, "w") as fh:
        json.dump(blob, fh)
    poisoned = KLContext(path)
    assert key not in poisoned.cache
    assert poisoned.polynomial((0, 2, 1, 3), (2, 3, 0, 1)) == [1, 1]
