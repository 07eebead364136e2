"""Non-crossing perfect matchings of reflex vertices inside simple polygons.

The matcher splits the polygon along a chord between two pending vertices
that leaves an even number of pending vertices on each side, then recurses.
Chords are tried in boundary order, so the result is the lexicographically
least one reachable by that search.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .geom import Color, GeometryError, Point, orient, segment_in_polygon, segments_properly_cross, signed_area2
from .gcg import Pslg
from .matching import BRMatching


class ReflexMatchError(GeometryError):
    pass


@dataclass(frozen=True)
class ReflexPolygonInstance:
    """Counterclockwise simple polygon; ``targets`` are the vertices to match."""
    points: tuple[Point, ...]
    targets: tuple[int, ...]
    colors: tuple = ()          # per vertex; None where unknown

    @classmethod
    def from_polygon(cls, points: Sequence[Point], colors: Sequence | None = None) -> "ReflexPolygonInstance":
        """Target every reflex vertex (a clockwise input is reversed first)."""
        pts = list(points)
        cols = list(colors) if colors is not None else [None] * len(pts)
        if signed_area2(pts) < 0:
            pts.reverse()
            cols.reverse()
        n = len(pts)
        targets = tuple(i for i in range(n)
                        if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) < 0)
        return cls(tuple(pts), targets, tuple(cols))

    def color(self, i):
        return self.colors[i] if self.colors else None

    def is_alternating(self) -> bool:
        cs = [self.color(i) for i in self.targets]
        if any(c is None for c in cs):
            return False
        return all(cs[k] != cs[(k + 1) % len(cs)] for k in range(len(cs)))


def _chord_ok(inst: ReflexPolygonInstance, poly: tuple, a: int, b: int) -> bool:
    ca, cb = inst.color(a), inst.color(b)
    if ca is not None and cb is not None and ca == cb:
        return False
    return segment_in_polygon([inst.points[i] for i in poly], inst.points[a], inst.points[b])


def match_reflex_in_polygon(inst: ReflexPolygonInstance) -> list[tuple[int, int]]:
    """Pairs of vertex indices; each segment lies in the closed polygon.

    Colored targets are only paired with the opposite color.  Raises
    :class:`ReflexMatchError` for an odd target count or when no matching
    exists.
    """
    if len(inst.targets) % 2:
        raise ReflexMatchError(f"odd number of reflex vertices ({len(inst.targets)})")
    memo: dict = {}

    def solve(poly: tuple, pending: frozenset):
        key = (poly, pending)
        if key in memo:
            return memo[key]
        todo = [k for k, v in enumerate(poly) if v in pending]
        result = None
        if not todo:
            result = []
        elif len(todo) % 2 == 0:
            k0 = todo[0]
            a = poly[k0]
            for t in range(1, len(todo), 2):
                k1 = todo[t]
                b = poly[k1]
                if not _chord_ok(inst, poly, a, b):
                    continue
                rest = pending - {a, b}
                inner = poly[k0:k1 + 1]
                outer = poly[k1:] + poly[:k0 + 1]
                left = solve(inner, rest & frozenset(inner)) if len(inner) > 2 else []
                if left is None:
                    continue
                right = solve(outer, rest & frozenset(outer)) if len(outer) > 2 else []
                if right is None:
                    continue
                result = [(a, b)] + left + right
                break
        memo[key] = result
        return result

    out = solve(tuple(range(len(inst.points))), frozenset(inst.targets))
    if out is None:
        raise ReflexMatchError("no non-crossing matching of the reflex vertices")
    return sorted(out)


def brute_force_matchings(inst: ReflexPolygonInstance):
    """Every valid matching of the targets, by exhaustive pairing (test oracle)."""
    pts = inst.points
    poly = list(pts)

    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for b in rest[1:]:
            ca, cb = inst.color(a), inst.color(b)
            if ca is not None and cb is not None and ca == cb:
                continue
            if not segment_in_polygon(poly, pts[a], pts[b]):
                continue
            others = [v for v in rest if v != a and v != b]
            for tail in rec(others):
                yield [(a, b)] + tail

    for m in rec(list(inst.targets)):
        segs = [(pts[a], pts[b]) for a, b in m]
        if all(not segments_properly_cross(s, t) for s, t in combinations(segs, 2)):
            yield sorted(m)


def check_polygon_matching(inst: ReflexPolygonInstance, pairs) -> list[str]:
    """Problems with a proposed matching; empty when it is valid."""
    out = []
    used = [v for p in pairs for v in p]
    if sorted(used) != sorted(inst.targets):
        out.append("not a perfect matching of the reflex vertices")
    pts = inst.points
    for a, b in pairs:
        if not segment_in_polygon(list(pts), pts[a], pts[b]):
            out.append(f"segment {(a, b)} leaves the polygon")
        ca, cb = inst.color(a), inst.color(b)
        if ca is not None and ca == cb:
            out.append(f"segment {(a, b)} is monochromatic")
    for (a, b), (c, d) in combinations(pairs, 2):
        if segments_properly_cross((pts[a], pts[b]), (pts[c], pts[d])):
            out.append(f"segments {(a, b)} and {(c, d)} cross")
    return out


def match_reflex_in_gcg(G: Pslg) -> list[tuple[int, int]]:
    """Match the reflex vertices of G inside its simplification.

    Returns ``(red vertex, blue vertex)`` pairs of graph vertex ids.
    """
    out = []
    for fp in G.simplification.polygons:
        ids = fp.vertex_ids
        if not fp.reflex_ids:
            continue
        colors = [G.colors[v] if v is not None else None for v in ids]
        inst = ReflexPolygonInstance(fp.points, tuple(k for k, v in enumerate(ids) if v is not None),
                                     tuple(colors))
        for a, b in match_reflex_in_polygon(inst):
            u, v = ids[a], ids[b]
            if G.colors[u] is Color.BLUE:
                u, v = v, u
            out.append((u, v))
    return sorted(out)


def gcg_matching_labels(G: Pslg, pairs) -> BRMatching:
    """Translate vertex-id pairs into a matching over point labels."""
    return BRMatching.of((G.labels[u], G.labels[v]) for u, v in pairs)
