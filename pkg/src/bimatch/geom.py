"""Exact planar predicates over rational coordinates.

Every coordinate is a :class:`gmpy2.mpq`.  Nothing in this module rounds;
signs are decided on exact determinants.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import NamedTuple, Sequence

from gmpy2 import mpq

Scalar = type(mpq(0))


class GeometryError(ValueError):
    pass


def to_scalar(value) -> Scalar:
    """Normalize an int, Fraction, decimal string or ``"p/q"`` string."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        # the decimal the user typed, not the binary float
        value = repr(value)
    if isinstance(value, str):
        try:
            f = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"not a rational number: {value!r}") from exc
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"unsupported coordinate type {type(value).__name__}")


def format_scalar(v: Scalar) -> str:
    """Canonical text form: ``7`` or ``-3/4``."""
    v = to_scalar(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


class Point(NamedTuple):
    x: Scalar
    y: Scalar

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_scalar(x), to_scalar(y))

    def __repr__(self) -> str:
        return f"Point({format_scalar(self.x)}, {format_scalar(self.y)})"


class Color(str, Enum):
    RED = "R"
    BLUE = "B"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class ColoredPoint(NamedTuple):
    point: Point
    color: Color


class Segment(NamedTuple):
    a: Point
    b: Point


class Turn(IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Side(IntEnum):
    NEGATIVE = -1
    ON = 0
    POSITIVE = 1


class Location(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_BOUNDARY = "on_boundary"


# -- vector helpers ---------------------------------------------------------

def sub(a, b) -> Point:
    return Point(a[0] - b[0], a[1] - b[1])


def add(a, b) -> Point:
    return Point(a[0] + b[0], a[1] + b[1])


def scale(a, t) -> Point:
    return Point(a[0] * t, a[1] * t)


def lerp(a, b, t) -> Point:
    return Point(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def midpoint(a, b) -> Point:
    half = mpq(1, 2)
    return Point((a[0] + b[0]) * half, (a[1] + b[1]) * half)


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def det3(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def orientation(a, b, c) -> Turn:
    """Turn made by walking a -> b -> c."""
    return Turn(orient(a, b, c))


def l1_norm(v):
    return abs(v[0]) + abs(v[1])


# -- segments ---------------------------------------------------------------

def _between(a, b, p) -> bool:
    """p collinear with a, b: is p in the closed segment [a, b]?"""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def on_segment(p, a, b) -> bool:
    """p lies on the closed segment [a, b]."""
    return orient(a, b, p) == 0 and _between(a, b, p)


def in_open_segment(p, a, b) -> bool:
    return p != a and p != b and on_segment(p, a, b)


def segment_param(a, b, p):
    """Position of p on the line ab with a at 0 and b at 1."""
    d = sub(b, a)
    return dot(sub(p, a), d) / dot(d, d)


def segments_properly_cross(s1: Segment, s2: Segment) -> bool:
    """True iff the open segments meet in a single point, or overlap collinearly.

    Shared endpoints, touching endpoints and identical segments do not count.
    """
    a, b = s1
    c, d = s2
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 == 0 and o2 == 0:
        if {a, b} == {c, d}:
            return False
        # collinear: do the open intervals overlap with positive length?
        u = sub(b, a)
        tc, td = dot(sub(c, a), u), dot(sub(d, a), u)
        lo, hi = min(tc, td), max(tc, td)
        return max(lo, 0) < min(hi, dot(u, u))
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments [a,b] and [c,d] share at least one point."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and _between(a, b, c)) or (o2 == 0 and _between(a, b, d))
            or (o3 == 0 and _between(c, d, a)) or (o4 == 0 and _between(c, d, b)))


def open_segment_hits(p, q, u, w) -> bool:
    """Does the open segment (p, q) meet the closed segment [u, w]?"""
    o1 = orient(p, q, u)
    o2 = orient(p, q, w)
    if o1 == 0 and o2 == 0:
        d = sub(q, p)
        L = dot(d, d)
        tu, tw = dot(sub(u, p), d), dot(sub(w, p), d)
        lo, hi = min(tu, tw), max(tu, tw)
        return max(lo, 0) <= min(hi, L) and hi > 0 and lo < L
    if o1 * o2 > 0:
        return False
    o3 = orient(u, w, p)
    o4 = orient(u, w, q)
    return o3 * o4 < 0


def line_intersection(a, b, c, d) -> Point | None:
    """Intersection point of the (non-parallel) lines ab and cd."""
    r = sub(b, a)
    s = sub(d, c)
    den = cross(r, s)
    if den == 0:
        return None
    t = cross(sub(c, a), s) / den
    return lerp(a, b, t)


def ray_segment_hit(o, direction, u, w):
    """First parameter t > 0 with o + t*direction on [u, w], or None."""
    den = cross(direction, sub(w, u))
    ou = sub(u, o)
    if den == 0:
        if cross(ou, direction) != 0:
            return None
        dd = dot(direction, direction)
        tu, tw = dot(ou, direction) / dd, dot(sub(w, o), direction) / dd
        if min(tu, tw) <= 0:
            # behind the apex, or the apex sits on the segment itself
            return None
        return min(tu, tw)
    t = cross(ou, sub(w, u)) / den
    s = cross(ou, direction) / den
    if t > 0 and 0 <= s <= 1:
        return t
    return None


# -- lines ------------------------------------------------------------------

@dataclass(frozen=True)
class Line:
    """``A*x + B*y + C = 0`` with the first nonzero of (A, B) equal to 1.

    The positive side is to the right of :attr:`direction`, so for a
    vertical line ``x = c`` the direction points up and the positive side
    is ``x > c``.
    """
    A: Scalar
    B: Scalar
    C: Scalar

    def __post_init__(self):
        if self.A == 0 and self.B == 0:
            raise GeometryError("degenerate line")

    @classmethod
    def from_coeffs(cls, A, B, C) -> "Line":
        A, B, C = to_scalar(A), to_scalar(B), to_scalar(C)
        if A == 0 and B == 0:
            raise GeometryError("degenerate line")
        k = A if A != 0 else B
        return cls(A / k, B / k, C / k)

    @classmethod
    def through(cls, p, q) -> "Line":
        if p == q:
            raise GeometryError("line through coincident points")
        A = q[1] - p[1]
        B = p[0] - q[0]
        return cls.from_coeffs(A, B, -(A * p[0] + B * p[1]))

    @classmethod
    def vertical(cls, x) -> "Line":
        return cls.from_coeffs(1, 0, -to_scalar(x))

    @classmethod
    def point_direction(cls, p, d) -> "Line":
        return cls.through(p, add(p, d))

    @property
    def normal(self) -> Point:
        return Point(self.A, self.B)

    @property
    def direction(self) -> Point:
        return Point(-self.B, self.A)

    def value(self, p):
        return self.A * p[0] + self.B * p[1] + self.C

    def side(self, p) -> int:
        v = self.A * p[0] + self.B * p[1] + self.C
        return (v > 0) - (v < 0)

    def param(self, p):
        """Coordinate of p along the direction (orders points on the line)."""
        return -self.B * p[0] + self.A * p[1]

    def point_at(self, t) -> Point:
        """Point on the line with ``param == t``."""
        n2 = self.A * self.A + self.B * self.B
        base = Point(-self.A * self.C / n2, -self.B * self.C / n2)
        d = self.direction
        return Point(base[0] + d[0] * t / n2, base[1] + d[1] * t / n2)

    def key(self):
        return (self.A, self.B, self.C)

    def __repr__(self) -> str:
        return (f"Line({format_scalar(self.A)}*x + {format_scalar(self.B)}*y"
                f" + {format_scalar(self.C)})")


def line_side(line: Line, p) -> Side:
    return Side(line.side(p))


def segment_line_intersection(s: Segment, line: Line) -> Point | None:
    """Crossing point when the endpoints are strictly on opposite sides."""
    va, vb = line.value(s[0]), line.value(s[1])
    if (va > 0) == (vb > 0) or va == 0 or vb == 0:
        return None
    return lerp(s[0], s[1], va / (va - vb))


# -- polygons ---------------------------------------------------------------

def signed_area2(poly: Sequence) -> Scalar:
    total = mpq(0)
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        total += a[0] * b[1] - a[1] * b[0]
    return total


def is_simple_polygon(poly: Sequence) -> bool:
    """Closed chain with no repeated vertex and edges meeting only at joints."""
    n = len(poly)
    if n < 3 or len(set(poly)) != n:
        return False
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                shared = b if j == i + 1 else a
                other_i = a if shared == b else b
                other_j = d if shared == c else c
                # adjacent edges must not fold back onto each other
                if orient(other_i, shared, other_j) == 0 and \
                        dot(sub(other_i, shared), sub(other_j, shared)) > 0:
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


def winding_number(walk: Sequence, p) -> int:
    """Winding number of a closed walk around p (p must not lie on it)."""
    wn = 0
    n = len(walk)
    py = p[1]
    for i in range(n):
        a, b = walk[i], walk[(i + 1) % n]
        if a[1] <= py:
            if b[1] > py and orient(a, b, p) > 0:
                wn += 1
        elif b[1] <= py and orient(a, b, p) < 0:
            wn -= 1
    return wn


def point_in_simple_polygon(poly: Sequence, p, check: bool = True) -> Location:
    """Classify p against a simple polygon given by its vertex cycle."""
    if check and not is_simple_polygon(poly):
        raise GeometryError("polygon is not simple")
    n = len(poly)
    for i in range(n):
        if on_segment(p, poly[i], poly[(i + 1) % n]):
            return Location.ON_BOUNDARY
    # crossing number with a half-open rule on y handles vertex hits
    inside = False
    px, py = p
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (a[1] > py) != (b[1] > py):
            xcross = a[0] + (py - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if xcross > px:
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def segment_in_polygon(poly: Sequence, a, b) -> bool:
    """Closed segment [a, b] lies inside or on the boundary of the polygon."""
    n = len(poly)
    cuts = {mpq(0), mpq(1)}
    for i in range(n):
        u, w = poly[i], poly[(i + 1) % n]
        o1, o2 = orient(a, b, u), orient(a, b, w)
        if o1 * o2 < 0 and orient(u, w, a) * orient(u, w, b) < 0:
            return False
        for v in (u, w):
            if on_segment(v, a, b):
                cuts.add(segment_param(a, b, v))
    # between consecutive cuts the segment stays on one side of the boundary
    ts = sorted(cuts)
    for t0, t1 in zip(ts, ts[1:]):
        m = lerp(a, b, (t0 + t1) / 2)
        if point_in_simple_polygon(poly, m, check=False) is Location.OUTSIDE:
            return False
    for p in (a, b):
        if point_in_simple_polygon(poly, p, check=False) is Location.OUTSIDE:
            return False
    return True


def segment_polygon_disjoint(poly: Sequence, a, b) -> bool:
    """Closed segment [a, b] shares no point with the closed polygon."""
    n = len(poly)
    for i in range(n):
        if segments_intersect(a, b, poly[i], poly[(i + 1) % n]):
            return False
    return point_in_simple_polygon(poly, a, check=False) is Location.OUTSIDE


def check_general_position(points: Sequence) -> bool:
    """No three points collinear and all x-coordinates distinct.

    Accepts plain points or :class:`ColoredPoint` records.
    """
    pts = [p.point if isinstance(p, ColoredPoint) else p for p in points]
    xs = [p[0] for p in pts]
    if len(set(xs)) != len(xs):
        return False
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orient(pts[i], pts[j], pts[k]) == 0:
                    return False
    return True
