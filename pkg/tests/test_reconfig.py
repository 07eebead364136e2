import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bimatch.explorer import build_graph, lower_bound_instance
from bimatch.gcg import build_pslg, is_gcg, polygon_graph
from bimatch.geom import Line, Point
from bimatch.hamsandwich import find_ham_sandwich_cut, ham_sandwich_matching
from bimatch.matching import BichromaticPointSet, BRMatching, InvalidMatchingError
from bimatch.reconfig import (
    NotChromaticError, augment_step, avoid_cut, build_extension, connect, connect_pair,
    contract_violations, enclosing_octagon, extension_violations, find_escape, init_augment,
    is_isolated, merge_sequences, next_matching, next_matching_step, state_violations,
    verify_sequence,
)
from gmpy2 import mpq
from _gen import (chi_bits, crossing_ys, fr_cross, random_chromatic_instance, random_matching,
                  random_points, segs, union_planar)


def P_(x, y):
    return Point(mpq(x), mpq(y))


AUG_P = BichromaticPointSet.from_coords([(8, 32), (36, 23), (24, 25)],
                                        [(33, 40), (17, 15), (13, 5)])
AUG_M = BRMatching.of([(0, 2), (1, 0), (2, 1)])
AUG_L = Line.from_coeffs(1, "-86933/61335", "773669/122670")


def test_isolated_examples():
    sq = [P_(0, 0), P_(4, 0), P_(4, 4), P_(0, 4)]
    hub = build_pslg(sq + [P_(2, 1)], [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2)])
    assert is_isolated(hub, 4)
    wedge = build_pslg(sq + [P_(2, 2)], [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1)])
    assert not is_isolated(wedge, 4)
    spike = build_pslg(sq + [P_(2, 0), P_(2, 2)],
                       [(0, 4), (4, 1), (1, 2), (2, 3), (3, 0), (4, 5)])
    assert not is_isolated(spike, 5)


def test_octagon_contains_points():
    from bimatch.geom import Location, point_in_simple_polygon
    pts = [P_(0, 0), P_(5, 0), P_(0, 5), P_(5, 5), P_(2, 3)]
    octo = enclosing_octagon(pts)
    assert len(octo) == 8
    for p in pts:
        assert point_in_simple_polygon(octo, p) is Location.INSIDE


def test_not_chromatic_rejected():
    P = BichromaticPointSet.from_coords([(0, 0), (1, 4)], [(4, 1), (5, 5)])
    M = BRMatching.of([(0, 0), (1, 1)])
    # both segments cross with their red end on the same side
    line = Line.through(P_(2, -1), P_(mpq(21, 10), 9))
    with pytest.raises(NotChromaticError):
        init_augment(P, M, line)


def test_augment_isolates_previous_attachment():
    st0 = init_augment(AUG_P, AUG_M, AUG_L)
    assert state_violations(st0) == []
    assert st0.k == 3
    assert find_escape(st0) is None
    st1 = augment_step(st0, check=True)
    assert st1.i == 2
    v = st1.vertex(st1.x(1))
    assert st1.G.degree(v) == 4
    assert is_isolated(st1.G, v)
    assert state_violations(st1) == []


def test_extension_and_step_on_augment_instance():
    ext = build_extension(AUG_P, AUG_M, AUG_L, check=True)
    assert (ext.j, ext.augment_steps) == (2, 1)
    assert extension_violations(ext) == []
    rec = next_matching_step(AUG_P, AUG_M, AUG_L, check=True)
    assert contract_violations(AUG_P, AUG_L, rec) == []
    assert union_planar(AUG_P, AUG_M, rec.after)
    assert rec.dropped not in rec.after


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_next_matching_contract(seed):
    P, M, line = random_chromatic_instance(random.Random(seed))
    rec = next_matching_step(P, M, line, check=True)
    M2 = rec.after
    assert union_planar(P, M, M2)
    assert len({r for r, _ in M2.pairs}) == P.n and len({b for _, b in M2.pairs}) == P.n
    assert not any(fr_cross(s, t) for s, t in combinations(segs(P, M2), 2))
    before = crossing_ys(P, M, line)
    after = crossing_ys(P, M2, line)
    xj = line.param(rec.extension.x_j)
    assert rec.dropped not in after
    kept = {p for p, t in before.items() if t < xj}
    assert {p for p, t in after.items() if t < xj} == kept
    assert ext_ok(rec)


def ext_ok(rec):
    return rec.extension.augment_steps <= rec.extension.state.k - 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 5))
def test_avoid_cut_decreases_potential(seed, n):
    rng = random.Random(seed)
    P = random_points(rng, n)
    M = random_matching(rng, P)
    line = find_ham_sandwich_cut(P).line
    seq = avoid_cut(P, M, line)
    bits = [chi_bits(P, line, m) for m in seq.matchings]
    assert all(a > b for a, b in zip(bits, bits[1:]))
    assert crossing_ys(P, seq.last, line) == {}
    assert verify_sequence(P, seq)


def test_connect_trivial():
    P = BichromaticPointSet.from_coords([(0, 0)], [(1, 1)])
    M = BRMatching.of([(0, 0)])
    seq = connect(P, M)
    assert seq.matchings == [M]


def test_connect_two_pairs():
    P = BichromaticPointSet.from_coords([(0, 0), (10, 1)], [(1, 2), (11, 3)])
    H = ham_sandwich_matching(P).matching
    for M in build_graph(P).nodes:
        seq = connect(P, M)
        assert seq.first == M and seq.last == H
        assert verify_sequence(P, seq)
    assert verify_sequence(P, seq)


def test_connect_rejects_invalid():
    P = BichromaticPointSet.from_coords([(0, 0), (3, 1)], [(2, 3), (-1, 2)])
    with pytest.raises(InvalidMatchingError):
        connect(P, BRMatching.of([(0, 0), (1, 1)]))


def test_lower_bound_pair_needs_long_sequence():
    inst = lower_bound_instance(2)
    seq = connect_pair(inst.P, inst.M, inst.M2)
    assert seq.first == inst.M and seq.last == inst.M2
    assert verify_sequence(inst.P, seq)
    assert len(seq) >= 3
    G = build_graph(inst.P)
    for a, b in zip(seq.matchings, seq.matchings[1:]):
        assert G.is_edge_or_equal(a, b)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_connect_random(seed, n):
    rng = random.Random(seed)
    P = random_points(rng, n)
    M = random_matching(rng, P)
    seq = connect(P, M)
    assert seq.first == M
    assert seq.last == ham_sandwich_matching(P).matching
    for a, b in zip(seq.matchings, seq.matchings[1:]):
        assert a != b and union_planar(P, a, b)


def test_verify_sequence_reports():
    P = BichromaticPointSet.from_coords([(0, 0), (3, 1)], [(2, 3), (-1, 2)])
    A = BRMatching.of([(0, 1), (1, 0)])     # two sides of the quadrilateral
    B = BRMatching.of([(0, 0), (1, 1)])     # the two diagonals cross
    assert verify_sequence(P, [A])
    rep = verify_sequence(P, [A, B])
    assert not rep and rep.index == 1
    assert not verify_sequence(P, [])


def test_verify_sequence_incompatible_step():
    P = BichromaticPointSet.from_coords([(6, 5), (4, 1), (3, 8)], [(1, 5), (7, 8), (8, 2)])
    A = BRMatching.of([(0, 0), (1, 2), (2, 1)])
    B = BRMatching.of([(0, 1), (1, 0), (2, 2)])
    assert verify_sequence(P, [A]) and verify_sequence(P, [B])
    assert not union_planar(P, A, B)
    rep = verify_sequence(P, [A, B])
    assert not rep and rep.index == 1 and "compatible" in rep.reason


def test_merge_pads_shorter():
    a = [BRMatching.of([(0, 0)]), BRMatching.of([(0, 1)])]
    b = [BRMatching.of([(5, 5)])]
    out = merge_sequences(a, b)
    assert [m.pairs for m in out] == [((0, 0), (5, 5)), ((0, 1), (5, 5))]
