"""Brute-force view of the compatible matching graph on small inputs."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from gmpy2 import mpq

from . import _kernels
from .geom import Point, segments_properly_cross
from .matching import BichromaticPointSet, BRMatching, validate_matching


class CapExceededError(ValueError):
    pass


def enum_cap() -> int:
    return int(os.environ.get("BIMATCH_ENUM_CAP", "6"))


def crossing_table(P: BichromaticPointSet) -> np.ndarray:
    """crosses[r, b, r2, b2]: do segments (r, b) and (r2, b2) properly cross?"""
    n = P.n
    segs = [[P.segment((r, b)) for b in range(n)] for r in range(n)]
    out = np.zeros((n, n, n, n), dtype=np.bool_)
    flat = [(r, b) for r in range(n) for b in range(n)]
    for k, (r, b) in enumerate(flat):
        for r2, b2 in flat[k + 1:]:
            if segments_properly_cross(segs[r][b], segs[r2][b2]):
                out[r, b, r2, b2] = out[r2, b2, r, b] = True
    return out


def enumerate_matchings(P: BichromaticPointSet, cap: int | None = None) -> list[BRMatching]:
    """Every BR-matching of P, sorted by their pair tuples.

    Reds are assigned in x-order; a branch is cut as soon as its newest
    segment crosses an earlier one.
    """
    cap = enum_cap() if cap is None else cap
    n = P.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the enumeration cap {cap}")
    crosses = crossing_table(P)
    order = sorted(range(n), key=lambda r: P.reds[r][0])
    used = [False] * n
    chosen: list[tuple[int, int]] = []
    out = []

    def rec(k):
        if k == n:
            out.append(BRMatching.of(chosen))
            return
        r = order[k]
        for b in range(n):
            if used[b] or any(crosses[r, b, r2, b2] for r2, b2 in chosen):
                continue
            used[b] = True
            chosen.append((r, b))
            rec(k + 1)
            chosen.pop()
            used[b] = False

    rec(0)
    out.sort(key=lambda m: m.pairs)
    return out


@dataclass
class CompatibleGraph:
    P: BichromaticPointSet
    nodes: list[BRMatching]
    adj: np.ndarray                 # symmetric, no self-loops

    @cached_property
    def index(self) -> dict:
        return {m: k for k, m in enumerate(self.nodes)}

    def neighbors(self, m: BRMatching) -> list[BRMatching]:
        k = self.index[m]
        return [self.nodes[j] for j in np.flatnonzero(self.adj[k])]

    def degree(self, m: BRMatching) -> int:
        return int(self.adj[self.index[m]].sum())

    def is_edge_or_equal(self, a: BRMatching, b: BRMatching) -> bool:
        return a == b or bool(self.adj[self.index[a], self.index[b]])


def build_graph(P: BichromaticPointSet, cap: int | None = None,
                use_numba: bool | None = None) -> CompatibleGraph:
    nodes = enumerate_matchings(P, cap)
    n = P.n
    assign = np.array([[dict(m.pairs)[r] for r in range(n)] for m in nodes],
                      dtype=np.int64).reshape(len(nodes), n)
    adj = _kernels.compat_matrix(assign, crossing_table(P), use_numba)
    return CompatibleGraph(P, nodes, adj)


@dataclass
class Analysis:
    connected: bool
    diameter: int | None            # None when disconnected
    dist: np.ndarray

    def distance(self, G: CompatibleGraph, a: BRMatching, b: BRMatching) -> int:
        return int(self.dist[G.index[a], G.index[b]])


def analyze(G: CompatibleGraph, use_numba: bool | None = None) -> Analysis:
    dist = _kernels.bfs_all(G.adj, use_numba)
    connected = bool((dist >= 0).all())
    diameter = int(dist.max()) if connected and dist.size else (0 if not dist.size else None)
    return Analysis(connected, diameter, dist)


# -- the lower-bound family -----------------------------------------------------

@dataclass(frozen=True)
class LowerBoundInstance:
    P: BichromaticPointSet
    M: BRMatching
    M2: BRMatching
    arcs: tuple       # four tuples of (color, index), in order around the circle


def _circle_point(theta: float, max_den: int) -> Point:
    """Rational point on the unit circle near angle theta."""
    u = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    u2 = u * u
    return Point(mpq((1 - u2) / (1 + u2)), mpq(2 * u / (1 + u2)))


def lower_bound_instance(n: int, tilt: float = 0.01) -> LowerBoundInstance:
    """4n points near a regular polygon, colored in four arcs B, R, B, R.

    The polygon is tilted slightly so that mirror-image vertices do not
    share an x-coordinate.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m = 4 * n
    thetas = [math.pi / 2 + (2 * k + 1) * math.pi / m + tilt for k in range(m)]
    pts = [_circle_point(t, 10 ** 4) for t in thetas]
    arcs = [pts[a * n:(a + 1) * n] for a in range(4)]
    blues = arcs[0] + arcs[2]
    reds = arcs[1] + arcs[3]
    P = BichromaticPointSet(tuple(reds), tuple(blues))
    # labels: arc 0 -> blue 0..n-1, arc 1 -> red 0..n-1, arc 2 -> blue n.., arc 3 -> red n..
    lab = [[("B", k) for k in range(n)], [("R", k) for k in range(n)],
           [("B", n + k) for k in range(n)], [("R", n + k) for k in range(n)]]

    def nested(a: int, b: int):
        out = []
        for k in range(n):
            x, y = lab[a][n - 1 - k], lab[b][k]
            red, blue = (x, y) if x[0] == "R" else (y, x)
            out.append((red[1], blue[1]))
        return out

    M = BRMatching.of(nested(0, 1) + nested(2, 3))
    M2 = BRMatching.of(nested(1, 2) + nested(3, 0))
    for mm in (M, M2):
        rep = validate_matching(P, mm)
        if not rep:     # pragma: no cover - construction guarantees this
            raise AssertionError(f"lower-bound matching invalid: {rep}")
    return LowerBoundInstance(P, M, M2, tuple(tuple(a) for a in lab))
