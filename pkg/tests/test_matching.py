import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bimatch.geom import Color, GeometryError, Line, Point
from bimatch.matching import (
    BichromaticPointSet, BRMatching, GeneralPositionError, InvalidMatchingError,
    candidate_crossings, chi, compatible, crossing_list, is_chromatic_cut, left_color,
    validate_matching,
)
from _gen import random_line, random_matching, random_points


def square():
    # reds on the left, blues on the right, slightly perturbed
    return BichromaticPointSet.from_coords([(0, 0), (1, 3)], [(3, 1), (4, 4)])


def test_validate_examples():
    P = square()
    assert validate_matching(P, BRMatching.of([(0, 0), (1, 1)]))
    rep = validate_matching(P, BRMatching.of([(0, 0), (1, 0)]))
    assert not rep and rep.kind == "not_perfect"
    rep = validate_matching(P, BRMatching.of([(0, 0)]))
    assert not rep and rep.kind == "not_perfect"
    with pytest.raises(IndexError):
        validate_matching(P, BRMatching.of([(0, 5), (1, 1)]))


def test_crossing_reported():
    P = BichromaticPointSet.from_coords([(0, 0), (1, 4)], [(3, 3), (4, 1)])
    rep = validate_matching(P, BRMatching.of([(0, 0), (1, 1)]))
    assert not rep and rep.kind == "crossing"
    assert validate_matching(P, BRMatching.of([(0, 1), (1, 0)]))


def test_point_set_rejections():
    with pytest.raises(GeneralPositionError):
        BichromaticPointSet.from_coords([(0, 0)], [(1, 1), (2, 3)])
    with pytest.raises(GeneralPositionError):
        BichromaticPointSet.from_coords([(0, 0), (1, 1)], [(2, 2), (5, 3)])
    with pytest.raises(GeneralPositionError):
        BichromaticPointSet.from_coords([], [])


def test_compatible_examples():
    P = square()
    M = BRMatching.of([(0, 0), (1, 1)])
    assert compatible(P, M, M)
    # convex position, alternating colors: the two matchings share no crossing
    Q = BichromaticPointSet.from_coords([(0, 0), (3, 4)], [(4, 1), (-1, 3)])
    A = BRMatching.of([(0, 0), (1, 1)])
    B = BRMatching.of([(0, 1), (1, 0)])
    assert validate_matching(Q, A) and validate_matching(Q, B)
    assert compatible(Q, A, B)
    with pytest.raises(InvalidMatchingError):
        compatible(P, M, BRMatching.of([(0, 0), (1, 0)]))


def chromatic_example():
    P = BichromaticPointSet.from_coords([(-1, 0), (2, 3)], [(1, 1), (-2, 4)])
    return P, BRMatching.of([(0, 0), (1, 1)]), Line.vertical(0)


def test_crossing_list_order_and_chromatic():
    P, M, line = chromatic_example()
    cl = crossing_list(P, M, line)
    assert [c.pair for c in cl] == [(0, 0), (1, 1)]
    assert left_color(P, (0, 0), line) is Color.RED
    assert left_color(P, (1, 1), line) is Color.BLUE
    assert is_chromatic_cut(P, M, line)
    P2 = BichromaticPointSet.from_coords([(-1, 0), (-2, 3)], [(1, 1), (2, 4)])
    assert not is_chromatic_cut(P2, M, line)
    assert not is_chromatic_cut(P, M, Line.vertical(5))
    with pytest.raises(GeometryError):
        crossing_list(P, M, Line.vertical(-1))


def test_candidate_order_oracle():
    P, M, line = chromatic_example()
    # oracle: the y at which each crossing red-blue segment meets x = 0
    want = []
    for r, red in enumerate(P.reds):
        for b, blue in enumerate(P.blues):
            if (red[0] < 0) != (blue[0] < 0):
                t = Fraction(int(-red[0])) / Fraction(int(blue[0] - red[0]))
                want.append((Fraction(int(red[1])) + t * int(blue[1] - red[1]), (r, b)))
    want.sort()
    assert candidate_crossings(P, line) == tuple(z for _, z in want)
    c = chi(P, line, M)
    assert c.bits == tuple(1 if z in M.pairs_set else 0 for _, z in want)


@given(st.integers(0, 10 ** 6))
def test_chi_orders_by_lowest_difference(seed):
    rng = random.Random(seed)
    P = random_points(rng, 3)
    line = random_line(rng)
    A, B = random_matching(rng, P), random_matching(rng, P)
    ca, cb = chi(P, line, A), chi(P, line, B)
    # oracle: compare as integers with the lowest crossing most significant
    ia = int("".join(map(str, ca.bits)) or "0", 2)
    ib = int("".join(map(str, cb.bits)) or "0", 2)
    assert (ca < cb) == (ia < ib)
    assert (ca == cb) == (ia == ib)


@given(st.integers(0, 10 ** 6))
def test_validate_agrees_with_pairwise_check(seed):
    rng = random.Random(seed)
    P = random_points(rng, rng.randint(1, 4))
    perm = list(range(P.n))
    rng.shuffle(perm)
    M = BRMatching.of(enumerate(perm))
    from bimatch.geom import segments_properly_cross
    segs = M.segments(P)
    want = not any(segments_properly_cross(segs[i], segs[j])
                   for i in range(P.n) for j in range(i + 1, P.n))
    assert bool(validate_matching(P, M)) == want
