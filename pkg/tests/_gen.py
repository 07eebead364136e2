"""Deterministic random instances shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from gmpy2 import mpq

from bimatch.geom import Line, Point
from bimatch.gcg import BiSegment, polygon_graph
from bimatch.matching import (
    BichromaticPointSet,
    BRMatching,
    GeneralPositionError,
    is_chromatic_cut,
    validate_matching,
)


def random_points(rng: random.Random, n: int, box: int = 40) -> BichromaticPointSet:
    while True:
        pts = set()
        while len(pts) < 2 * n:
            pts.add((rng.randint(0, box), rng.randint(0, box)))
        pts = list(pts)
        rng.shuffle(pts)
        try:
            return BichromaticPointSet.from_coords(pts[:n], pts[n:])
        except GeneralPositionError:
            pass


def all_matchings_by_permutation(P: BichromaticPointSet) -> list[BRMatching]:
    """Oracle: filter all n! pairings for planarity."""
    out = []
    for perm in permutations(range(P.n)):
        M = BRMatching.of(enumerate(perm))
        if validate_matching(P, M):
            out.append(M)
    return out


def random_matching(rng: random.Random, P: BichromaticPointSet) -> BRMatching:
    return rng.choice(all_matchings_by_permutation(P))


def random_line(rng: random.Random, box: int = 40) -> Line:
    def coord():
        return mpq(rng.randint(0, 2 * box), 2)
    p = (coord() + mpq(1, 3), coord() + mpq(1, 7))
    q = (coord() + mpq(1, 5), coord() + mpq(1, 11))
    return Line.through(Point(*p), Point(*q))


def random_chromatic_instance(rng: random.Random, n_lo: int = 2, n_hi: int = 5):
    while True:
        P = random_points(rng, rng.randint(n_lo, n_hi))
        M = random_matching(rng, P)
        line = random_line(rng)
        try:
            if is_chromatic_cut(P, M, line):
                return P, M, line
        except ValueError:
            continue


def random_convex_polygon(rng: random.Random, k: int = 6, box: int = 60) -> list[Point]:
    """Convex hull of random lattice points (at least a triangle)."""
    while True:
        pts = sorted({(rng.randint(0, box), rng.randint(0, box)) for _ in range(k * 2)})
        hull = _hull(pts)
        if len(hull) >= 3:
            return [Point(mpq(x), mpq(y)) for x, y in hull]


def _hull(pts):
    def cr(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cr(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cr(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def random_free_segments(rng: random.Random, poly, count: int):
    """Pairwise disjoint segments strictly inside a convex polygon."""
    from bimatch.geom import (Location, point_in_simple_polygon, segments_intersect,
                              check_general_position)
    segs: list[BiSegment] = []
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    tries = 0
    while len(segs) < count and tries < 2000:
        tries += 1
        a = Point(mpq(rng.randint(int(min(xs)) * 4, int(max(xs)) * 4), 4) + mpq(1, 97),
                  mpq(rng.randint(int(min(ys)) * 4, int(max(ys)) * 4), 4) + mpq(1, 89))
        b = Point(mpq(rng.randint(int(min(xs)) * 4, int(max(xs)) * 4), 4) + mpq(1, 83),
                  mpq(rng.randint(int(min(ys)) * 4, int(max(ys)) * 4), 4) + mpq(1, 79))
        if a[0] == b[0]:
            continue
        if any(point_in_simple_polygon(poly, p) is not Location.INSIDE for p in (a, b)):
            continue
        if any(segments_intersect(a, b, s.red, s.blue) for s in segs):
            continue
        ends = [e for s in segs for e in (s.red, s.blue)] + [a, b]
        if not check_general_position(ends):
            continue
        segs.append(BiSegment(a, b, (len(segs), len(segs))))
    return segs


def convex_gcg(rng: random.Random, k: int = 6):
    return polygon_graph(random_convex_polygon(rng, k))


def boundary_candidates(G, free):
    """Attachable locations: non-reflex vertices, edge points, free segment points."""
    from bimatch.gcg import Loc
    from bimatch.geom import lerp
    out = [Loc(p, vertex=v) for v, p in enumerate(G.points) if v not in G.reflex]
    for u, v in sorted(G.edges):
        for t in (mpq(1, 3), mpq(2, 3)):
            out.append(Loc(lerp(G.points[u], G.points[v], t), edge=(u, v)))
    seg = [Loc(lerp(s.red, s.blue, t), segment=s.key)
           for s in free for t in (mpq(1, 2), mpq(2, 5))]
    return out, seg


def random_glue_cut(rng: random.Random, G, free, tries: int = 60):
    """One random successful glue or cut, or None when nothing was found."""
    from bimatch.gcg import GlueCutError, color_visible, glue_cut
    bnd, seg = boundary_candidates(G, free)
    for _ in range(tries):
        if seg and rng.random() < 0.5:
            z, z2 = rng.choice(seg), rng.choice(bnd)
        else:
            z, z2 = rng.choice(bnd), rng.choice(bnd)
            if z.point == z2.point:
                continue
        try:
            if not color_visible(G, free, z, z2):
                continue
            return glue_cut(G, free, z, z2)
        except GlueCutError:
            continue
    return None


# -- independent oracles -----------------------------------------------------

def fr_cross(s, t):
    """Oracle: proper crossing with Fraction determinants."""
    def o(a, b, c):
        v = (Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1])) - \
            (Fraction(b[1]) - Fraction(a[1])) * (Fraction(c[0]) - Fraction(a[0]))
        return (v > 0) - (v < 0)
    (a, b), (c, d) = s, t
    if len({a, b, c, d}) < 4:
        return False
    return o(a, b, c) * o(a, b, d) < 0 and o(c, d, a) * o(c, d, b) < 0


def segs(P, M):
    return [(P.reds[r], P.blues[b]) for r, b in M.pairs]


def union_planar(P, M1, M2):
    return not any(fr_cross(s, t) for s in segs(P, M1) for t in segs(P, M2))


def crossing_ys(P, M, line):
    """Oracle: parameters along the line where M's segments cross it."""
    out = {}
    for r, b in M.pairs:
        a, c = P.reds[r], P.blues[b]
        sa, sc = line.side(a), line.side(c)
        if sa * sc < 0:
            fa = line.A * a[0] + line.B * a[1] + line.C
            fc = line.A * c[0] + line.B * c[1] + line.C
            t = fa / (fa - fc)
            q = (a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1]))
            out[(r, b)] = line.param(q)
    return out


def chi_bits(P, line, M):
    """Oracle: indicator vector of M over all crossing red-blue pairs in line order."""
    cands = []
    for r in range(P.n):
        for b in range(P.n):
            ys = crossing_ys(P, BRMatching.of([(r, b)]), line)
            if ys:
                cands.append((ys[(r, b)], (r, b)))
    cands.sort()
    pairs = set(M.pairs)
    return [1 if p in pairs else 0 for _, p in cands]
