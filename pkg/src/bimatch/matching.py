"""BR-matchings, compatibility, chromatic cuts and the crossing potential."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, NamedTuple, Sequence

from .geom import (
    Color,
    ColoredPoint,
    GeometryError,
    Line,
    Point,
    Segment,
    check_general_position,
    segment_line_intersection,
    segments_properly_cross,
)


class GeneralPositionError(GeometryError):
    pass


class InvalidMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class BichromaticPointSet:
    reds: tuple[Point, ...]
    blues: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "reds", tuple(self.reds))
        object.__setattr__(self, "blues", tuple(self.blues))
        if len(self.reds) != len(self.blues):
            raise GeneralPositionError(
                f"unbalanced colors: {len(self.reds)} red vs {len(self.blues)} blue")
        if not self.reds:
            raise GeneralPositionError("empty point set")
        if not check_general_position(self.reds + self.blues):
            raise GeneralPositionError(
                "points are not in general position "
                "(three collinear or two sharing an x-coordinate)")

    @classmethod
    def from_coords(cls, reds: Iterable, blues: Iterable) -> "BichromaticPointSet":
        return cls(tuple(Point.of(*p) for p in reds), tuple(Point.of(*p) for p in blues))

    @property
    def n(self) -> int:
        return len(self.reds)

    @property
    def points(self) -> list[ColoredPoint]:
        return ([ColoredPoint(p, Color.RED) for p in self.reds]
                + [ColoredPoint(p, Color.BLUE) for p in self.blues])

    def segment(self, pair) -> Segment:
        r, b = pair
        return Segment(self.reds[r], self.blues[b])

    def subset(self, red_idx: Sequence[int], blue_idx: Sequence[int]) -> "BichromaticPointSet":
        return BichromaticPointSet(tuple(self.reds[i] for i in red_idx),
                                   tuple(self.blues[j] for j in blue_idx))


@dataclass(frozen=True)
class BRMatching:
    """Red/blue index pairs, stored sorted by red index."""
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs",
                           tuple(sorted((int(r), int(b)) for r, b in self.pairs)))

    @classmethod
    def of(cls, pairs: Iterable) -> "BRMatching":
        return cls(tuple(pairs))

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs_set

    @cached_property
    def pairs_set(self) -> frozenset:
        return frozenset(self.pairs)

    def blue_of(self, r: int) -> int:
        return dict(self.pairs)[r]

    def segments(self, P: BichromaticPointSet) -> list[Segment]:
        return [P.segment(p) for p in self.pairs]


@dataclass(frozen=True)
class MatchingReport:
    ok: bool
    kind: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def validate_matching(P: BichromaticPointSet, M: BRMatching) -> MatchingReport:
    """Check the matching is perfect and non-crossing; name the first failure."""
    n = P.n
    for r, b in M.pairs:
        if not (0 <= r < n and 0 <= b < n):
            raise IndexError(f"pair {(r, b)} out of range for n={n}")
    seen_r: dict[int, tuple] = {}
    seen_b: dict[int, tuple] = {}
    for pair in M.pairs:
        r, b = pair
        if r in seen_r:
            return MatchingReport(False, "not_perfect", (seen_r[r], pair))
        if b in seen_b:
            return MatchingReport(False, "not_perfect", (seen_b[b], pair))
        seen_r[r] = pair
        seen_b[b] = pair
    if len(M.pairs) != n:
        missing = sorted(set(range(n)) - set(seen_r))
        return MatchingReport(False, "not_perfect", ("red", missing[0]) if missing
                              else ("blue", sorted(set(range(n)) - set(seen_b))[0]))
    segs = M.segments(P)
    for i in range(n):
        for j in range(i + 1, n):
            if segments_properly_cross(segs[i], segs[j]):
                return MatchingReport(False, "crossing", (M.pairs[i], M.pairs[j]))
    return MatchingReport(True)


def _require_valid(P, M):
    rep = validate_matching(P, M)
    if not rep:
        raise InvalidMatchingError(f"invalid matching ({rep.kind}): {rep.witness}")


def compatible(P: BichromaticPointSet, M: BRMatching, M2: BRMatching,
               check: bool = True) -> bool:
    """No segment of M properly crosses a segment of M2."""
    if check:
        _require_valid(P, M)
        _require_valid(P, M2)
    s1 = M.segments(P)
    s2 = M2.segments(P)
    for a in s1:
        for b in s2:
            if segments_properly_cross(a, b):
                return False
    return True


class Crossing(NamedTuple):
    pair: tuple[int, int]
    point: Point
    param: object   # position along the line direction


CrossingList = tuple  # tuple[Crossing, ...], sorted bottom-to-top


def _reject_line_through_points(P: BichromaticPointSet, line: Line):
    for p in P.reds + P.blues:
        if line.side(p) == 0:
            raise GeometryError(f"cut line passes through input point {p}")


def crossing_list(P: BichromaticPointSet, M: BRMatching, line: Line) -> CrossingList:
    """Segments of M crossing the line, sorted along the line's direction."""
    _reject_line_through_points(P, line)
    out = []
    for pair in M.pairs:
        x = segment_line_intersection(P.segment(pair), line)
        if x is not None:
            out.append(Crossing(pair, x, line.param(x)))
    out.sort(key=lambda c: c.param)
    return tuple(out)


def left_color(P: BichromaticPointSet, pair, line: Line) -> Color:
    """Color of the endpoint on the negative side of the line."""
    r, _ = pair
    return Color.RED if line.side(P.reds[r]) < 0 else Color.BLUE


def is_chromatic_cut(P: BichromaticPointSet, M: BRMatching, line: Line) -> bool:
    cl = crossing_list(P, M, line)
    if len(cl) < 2:
        return False
    return len({left_color(P, c.pair, line) for c in cl}) > 1


@total_ordering
@dataclass(frozen=True)
class ChiMeasure:
    """Membership bits over every bichromatic segment crossing a fixed line.

    Compared as a binary number with the lowest crossing most significant.
    """
    bits: tuple[int, ...]
    order: tuple[tuple[int, int], ...] = field(compare=False, default=())

    def __lt__(self, other: "ChiMeasure") -> bool:
        if len(self.bits) != len(other.bits):
            raise ValueError("measures over different candidate sets")
        return self.bits < other.bits

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def candidate_crossings(P: BichromaticPointSet, line: Line) -> tuple[tuple[int, int], ...]:
    """All n^2 red-blue segments crossing the line, sorted along it.

    Two candidates may cross each other exactly on the line; such ties are
    broken by index, which never matters since both cannot be in one matching.
    """
    _reject_line_through_points(P, line)
    cands = []
    for r in range(P.n):
        for b in range(P.n):
            x = segment_line_intersection(P.segment((r, b)), line)
            if x is not None:
                cands.append((line.param(x), (r, b)))
    cands.sort()
    return tuple(pair for _, pair in cands)


def chi(P: BichromaticPointSet, line: Line, M: BRMatching) -> ChiMeasure:
    order = candidate_crossings(P, line)
    return ChiMeasure(tuple(1 if z in M.pairs_set else 0 for z in order), order)
