"""Planar straight-line graphs with colored reflex vertices.

A :class:`Pslg` is immutable; every operator returns a new graph.  Faces are
closed half-edge walks with the face interior on the left, so a vertex of
degree one shows up as a spike (``u -> v -> u``) inside its face.

Segments of the matching that are not yet part of the graph ("free"
segments) are passed alongside the graph as :class:`BiSegment` records;
they block visibility and carry the left-turn coloring rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, cmp_to_key
from typing import Iterable, NamedTuple, Sequence

from gmpy2 import mpq

from .geom import (
    Color,
    GeometryError,
    Point,
    add,
    cross,
    dot,
    in_open_segment,
    l1_norm,
    lerp,
    midpoint,
    on_segment,
    open_segment_hits,
    orient,
    ray_segment_hit,
    scale,
    segment_param,
    segments_intersect,
    signed_area2,
    is_simple_polygon,
    sub,
    winding_number,
)

WILDCARD = "*"

CONVEX, FLAT, REFLEX = "convex", "flat", "reflex"


class PslgError(GeometryError):
    pass


class GlueCutError(PslgError):
    pass


class BiSegment(NamedTuple):
    red: Point
    blue: Point
    key: tuple      # (red label, blue label)


def remove_free(free: Sequence[BiSegment], key) -> tuple[BiSegment, ...]:
    return tuple(s for s in free if s.key != key)


@dataclass(frozen=True)
class Loc:
    """A point on the graph boundary or on a free segment."""
    point: Point
    vertex: int | None = None
    edge: tuple[int, int] | None = None
    segment: tuple | None = None

    @property
    def on_boundary(self) -> bool:
        return self.segment is None


@dataclass(frozen=True)
class Face:
    walk: tuple[int, ...]
    area2: object

    def corners(self):
        w = self.walk
        n = len(w)
        for k in range(n):
            yield w[k - 1], w[k], w[(k + 1) % n]


def _half(a, x) -> int:
    c = cross(a, x)
    return 0 if c > 0 or (c == 0 and dot(a, x) > 0) else 1


def ccw_less(a, x, y) -> bool:
    """Counterclockwise angle from a to x is smaller than from a to y."""
    hx, hy = _half(a, x), _half(a, y)
    if hx != hy:
        return hx < hy
    return cross(x, y) > 0


def _same_dir(a, x) -> bool:
    return cross(a, x) == 0 and dot(a, x) > 0


def _angle_cmp(u, v) -> int:
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


class Pslg:
    """Vertices (points with optional color and label) joined by straight edges."""

    __slots__ = ("points", "colors", "labels", "edges", "__dict__")

    def __init__(self, points, colors=None, labels=None, edges=()):
        self.points: tuple[Point, ...] = tuple(points)
        n = len(self.points)
        self.colors: tuple = tuple(colors) if colors is not None else (None,) * n
        self.labels: tuple = tuple(labels) if labels is not None else (None,) * n
        self.edges: frozenset = frozenset((min(u, v), max(u, v)) for u, v in edges)

    # -- construction -----------------------------------------------------

    def draft(self) -> "Draft":
        return Draft(self)

    def validate(self) -> None:
        """Raise :class:`PslgError` unless the drawing is planar."""
        if len(set(self.points)) != len(self.points):
            raise PslgError("duplicate vertices")
        es = sorted(self.edges)
        P = self.points
        for u, v in es:
            if u == v:
                raise PslgError("loop edge")
            for w in range(len(P)):
                if w != u and w != v and in_open_segment(P[w], P[u], P[v]):
                    raise PslgError(f"vertex {w} lies inside edge {(u, v)}")
        for i, (a, b) in enumerate(es):
            for c, d in es[i + 1:]:
                shared = {a, b} & {c, d}
                if shared:
                    s = shared.pop()
                    o1 = b if a == s else a
                    o2 = d if c == s else c
                    if _same_dir(sub(P[o1], P[s]), sub(P[o2], P[s])):
                        raise PslgError(f"edges {(a, b)} and {(c, d)} overlap")
                    continue
                if segments_intersect(P[a], P[b], P[c], P[d]):
                    raise PslgError(f"edges {(a, b)} and {(c, d)} cross")

    # -- derived structure --------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def neighbors(self) -> list[list[int]]:
        """Neighbors of each vertex sorted counterclockwise by direction."""
        nb = [[] for _ in self.points]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        P = self.points
        for v, lst in enumerate(nb):
            pv = P[v]
            lst.sort(key=cmp_to_key(lambda a, b: _angle_cmp(sub(P[a], pv), sub(P[b], pv))))
        return nb

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @cached_property
    def _pos(self) -> list[dict]:
        return [{w: k for k, w in enumerate(lst)} for lst in self.neighbors]

    def next_half_edge(self, he):
        u, v = he
        lst = self.neighbors[v]
        return v, lst[(self._pos[v][u] - 1) % len(lst)]

    @cached_property
    def _faces(self):
        faces = []
        he_face = {}
        for u, v in sorted(self.edges):
            for he in ((u, v), (v, u)):
                if he in he_face:
                    continue
                walk = []
                cur = he
                while cur not in he_face:
                    he_face[cur] = len(faces)
                    walk.append(cur[0])
                    cur = self.next_half_edge(cur)
                pts = [self.points[w] for w in walk]
                faces.append(Face(tuple(walk), signed_area2(pts)))
        return faces, he_face

    @property
    def faces(self) -> list[Face]:
        return self._faces[0]

    @property
    def half_edge_face(self) -> dict:
        return self._faces[1]

    @cached_property
    def bounded_faces(self) -> list[int]:
        """Faces traversed counterclockwise (positive area)."""
        return [i for i, f in enumerate(self.faces) if f.area2 > 0]

    def face_points(self, f: int) -> list[Point]:
        return [self.points[v] for v in self.faces[f].walk]

    def corner_kind(self, prev: int, v: int, nxt: int) -> str:
        if prev == nxt:
            return REFLEX
        P = self.points
        o = orient(P[prev], P[v], P[nxt])
        if o > 0:
            return CONVEX
        if o < 0:
            return REFLEX
        return FLAT

    @cached_property
    def reflex(self) -> dict:
        """vertex -> bounded face it is reflex in."""
        out = {}
        for f in self.bounded_faces:
            for prev, v, nxt in self.faces[f].corners():
                if self.corner_kind(prev, v, nxt) == REFLEX:
                    out[v] = f
        return out

    def face_at(self, p) -> int | None:
        """Bounded face containing p (p must avoid every edge)."""
        for f in self.bounded_faces:
            if winding_number(self.face_points(f), p) != 0:
                return f
        return None

    def on_any_edge(self, p) -> bool:
        P = self.points
        return any(on_segment(p, P[u], P[v]) for u, v in self.edges)

    def edge_at(self, p):
        P = self.points
        for u, v in self.edges:
            if in_open_segment(p, P[u], P[v]):
                return (u, v)
        return None

    @cached_property
    def simplification(self) -> "Simplification":
        return simplify(self)

    def __repr__(self):
        return f"Pslg({len(self.points)} vertices, {len(self.edges)} edges)"


class Draft:
    """Mutable staging area used by the graph operators."""

    def __init__(self, g: Pslg | None = None):
        g = g or Pslg(())
        self.points = list(g.points)
        self.colors = list(g.colors)
        self.labels = list(g.labels)
        self.edges = set(g.edges)
        self.index = {p: i for i, p in enumerate(self.points)}

    def add_vertex(self, p, color=None, label=None) -> int:
        if p in self.index:
            v = self.index[p]
            if color is not None:
                self.colors[v] = color
                self.labels[v] = label
            return v
        self.points.append(p)
        self.colors.append(color)
        self.labels.append(label)
        self.index[p] = len(self.points) - 1
        return len(self.points) - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise PslgError("loop edge")
        self.edges.add((min(u, v), max(u, v)))

    def split_edge(self, e, p) -> int:
        u, v = min(e), max(e)
        if (u, v) not in self.edges:
            raise PslgError(f"no edge {e}")
        w = self.add_vertex(p)
        self.edges.discard((u, v))
        self.add_edge(u, w)
        self.add_edge(w, v)
        return w

    def vertex_for(self, loc: Loc) -> int:
        """Vertex id for a boundary location, splitting an edge if needed."""
        if loc.vertex is not None:
            return loc.vertex
        if loc.point in self.index:
            return self.index[loc.point]
        if loc.edge is None:
            raise PslgError("location is not on the graph boundary")
        return self.split_edge(loc.edge, loc.point)

    def freeze(self) -> Pslg:
        return Pslg(self.points, self.colors, self.labels, self.edges)


def build_pslg(vertices: Sequence, edges: Iterable, colors=None, labels=None) -> Pslg:
    """Build and validate a planar straight-line graph."""
    g = Pslg(vertices, colors, labels, edges)
    g.validate()
    return g


def polygon_graph(poly: Sequence[Point]) -> Pslg:
    n = len(poly)
    return Pslg(poly, edges=[(i, (i + 1) % n) for i in range(n)])


# -- reflex vertices and coloring --------------------------------------------

def reflex_vertices(G: Pslg) -> list[tuple[int, int]]:
    """(vertex, face) for every vertex reflex in a bounded face."""
    return sorted(G.reflex.items())


def face_reflex_sequence(G: Pslg, f: int) -> list[int]:
    return [v for prev, v, nxt in G.faces[f].corners()
            if G.corner_kind(prev, v, nxt) == REFLEX]


def is_well_colored(G: Pslg) -> bool:
    for f in G.bounded_faces:
        seq = face_reflex_sequence(G, f)
        cols = []
        for v in seq:
            if G.colors[v] is None:
                raise PslgError(f"reflex vertex {v} has no color")
            cols.append(G.colors[v])
        k = len(cols)
        if any(cols[i] == cols[(i + 1) % k] for i in range(k)) and k > 0:
            return False
    return True


def gcg_violations(G: Pslg) -> list[str]:
    """Empty iff G is a glue-cut graph."""
    out = []
    for v, f in G.reflex.items():
        if G.degree(v) != 1:
            out.append(f"reflex vertex {v} has degree {G.degree(v)}")
        if G.colors[v] is None:
            out.append(f"reflex vertex {v} is uncolored")
    if not out and not is_well_colored(G):
        out.append("some face is not well-colored")
    if len(G.reflex) % 2:
        out.append("odd number of reflex vertices")
    return out


def is_gcg(G: Pslg) -> bool:
    return not gcg_violations(G)


def locate(G: Pslg, free: Sequence[BiSegment], p) -> Loc:
    if p in G.index:
        return Loc(p, vertex=G.index[p])
    e = G.edge_at(p)
    if e is not None:
        return Loc(p, edge=e)
    for s in free:
        if in_open_segment(p, s.red, s.blue):
            return Loc(p, segment=s.key)
    raise PslgError(f"{p} is neither on the graph nor on a free segment")


def _free_by_key(free, key) -> BiSegment:
    for s in free:
        if s.key == key:
            return s
    raise PslgError(f"no free segment {key}")


def visible(G: Pslg, free: Sequence[BiSegment], p, q) -> bool:
    """Open segment (p, q) lies in a bounded face and meets no free segment."""
    if p == q:
        return False
    P = G.points
    for u, v in G.edges:
        if open_segment_hits(p, q, P[u], P[v]):
            return False
    for s in free:
        if open_segment_hits(p, q, s.red, s.blue):
            return False
    return G.face_at(midpoint(p, q)) is not None


def _corner_half_edge(G: Pslg, v: int, f: int, direction):
    """Incoming half-edge (u, v) of face f whose corner at v contains direction."""
    P = G.points
    pv = P[v]
    hef = G.half_edge_face
    for u in G.neighbors[v]:
        he = (u, v)
        if hef.get(he) != f:
            continue
        w = G.next_half_edge(he)[1]
        a = sub(P[w], pv)
        if u == w:
            if not _same_dir(a, direction):
                return he
            continue
        b = sub(P[u], pv)
        if not _same_dir(a, direction) and ccw_less(a, direction, b):
            return he
    return None


def color_viewed_from(G: Pslg, free: Sequence[BiSegment], x: Loc, y):
    """Color of x as seen from y: ``Color.RED``, ``Color.BLUE`` or ``WILDCARD``.

    On a free segment the left-turn rule applies.  On the boundary we turn
    left at x and follow the face walk to the first reflex vertex.
    """
    if x.segment is not None:
        s = _free_by_key(free, x.segment)
        o = orient(y, x.point, s.blue)
        if o == 0:
            raise GlueCutError("viewer is collinear with the segment")
        return Color.BLUE if o > 0 else Color.RED
    f = G.face_at(midpoint(x.point, y))
    if f is None:
        raise GlueCutError("viewer is not inside a bounded face")
    if x.vertex is not None:
        v = x.vertex
        he = _corner_half_edge(G, v, f, sub(y, G.points[v]))
        if he is None:
            raise GlueCutError("viewer direction does not enter the face")
        if G.corner_kind(he[0], v, G.next_half_edge(he)[1]) == REFLEX:
            return _vertex_color(G, v)
        start = G.next_half_edge(he)
    else:
        u, w = x.edge
        P = G.points
        start = (u, w) if orient(P[u], P[w], y) > 0 else (w, u)
        if G.half_edge_face[start] != f:
            raise GlueCutError("edge side does not face the viewer")
    cur = start
    while True:
        nxt = G.next_half_edge(cur)
        if G.corner_kind(cur[0], cur[1], nxt[1]) == REFLEX:
            return _vertex_color(G, cur[1])
        cur = nxt
        if cur == start:
            return WILDCARD


def _vertex_color(G: Pslg, v: int):
    c = G.colors[v]
    if c is None:
        raise PslgError(f"reflex vertex {v} has no color")
    return c


def colors_match(c1, c2) -> bool:
    return c1 == WILDCARD or c2 == WILDCARD or c1 == c2


def color_visible(G: Pslg, free: Sequence[BiSegment], z: Loc, z2: Loc) -> bool:
    if not visible(G, free, z.point, z2.point):
        return False
    return colors_match(color_viewed_from(G, free, z, z2.point),
                        color_viewed_from(G, free, z2, z.point))


# -- operators ---------------------------------------------------------------

def _check_attachable(G: Pslg, loc: Loc):
    if loc.segment is not None:
        raise GlueCutError("expected a point on the graph boundary")
    if loc.vertex is not None and loc.vertex in G.reflex:
        raise GlueCutError("cannot attach at a reflex vertex")


def glue(G: Pslg, free: Sequence[BiSegment], z: Loc, z2: Loc, check: bool = True) -> Pslg:
    """Attach the free segment through z to the boundary point z2."""
    if z.segment is None:
        raise GlueCutError("z must lie inside a free segment")
    s = _free_by_key(free, z.segment)
    if not in_open_segment(z.point, s.red, s.blue):
        raise GlueCutError("z is not interior to its segment")
    _check_attachable(G, z2)
    if check and not color_visible(G, free, z, z2):
        raise GlueCutError("points are not color-visible")
    d = G.draft()
    v2 = d.vertex_for(z2)
    vz = d.add_vertex(z.point)
    a = d.add_vertex(s.red, Color.RED, s.key[0])
    b = d.add_vertex(s.blue, Color.BLUE, s.key[1])
    d.add_edge(vz, v2)
    d.add_edge(vz, a)
    d.add_edge(vz, b)
    return d.freeze()


def cut(G: Pslg, y: Loc, y2: Loc, free: Sequence[BiSegment] = (), check: bool = True) -> Pslg:
    """Join two color-visible boundary points with a chord."""
    _check_attachable(G, y)
    _check_attachable(G, y2)
    if check and not color_visible(G, free, y, y2):
        raise GlueCutError("points are not color-visible")
    d = G.draft()
    u = d.vertex_for(y)
    v = d.vertex_for(y2)
    if (min(u, v), max(u, v)) in d.edges:
        raise GlueCutError("chord already present")
    d.add_edge(u, v)
    return d.freeze()


def glue_cut(G: Pslg, free: Sequence[BiSegment], z: Loc, z2: Loc,
             check: bool = True) -> tuple[Pslg, tuple[BiSegment, ...]]:
    """Glue when one point is on a free segment, cut otherwise.

    Returns the new graph and the free segments still unattached.
    """
    if z.segment is not None:
        return glue(G, free, z, z2, check), remove_free(free, z.segment)
    if z2.segment is not None:
        return glue(G, free, z2, z, check), remove_free(free, z2.segment)
    return cut(G, z, z2, free, check), tuple(free)


# -- simplification ----------------------------------------------------------

@dataclass(frozen=True)
class FacePolygon:
    face: int
    points: tuple[Point, ...]
    vertex_ids: tuple           # graph vertex for kept reflex vertices, else None

    @property
    def reflex_ids(self) -> list[int]:
        return [v for v in self.vertex_ids if v is not None]


@dataclass(frozen=True)
class Simplification:
    polygons: tuple[FacePolygon, ...]
    eps: dict

    def polygon_of(self, face: int) -> FacePolygon:
        for p in self.polygons:
            if p.face == face:
                return p
        raise KeyError(face)


def _inset(G: Pslg, prev, v, nxt, eps) -> Point:
    P = G.points
    u = sub(P[prev], P[v])
    w = sub(P[nxt], P[v])
    # a rational direction strictly inside the convex angle
    d = add(scale(u, 1 / l1_norm(u)), scale(w, 1 / l1_norm(w)))
    return add(P[v], scale(d, eps))


def _polygon_ok(G: Pslg, f: int, pts: list, ids: list) -> bool:
    if len(pts) < 3 or not is_simple_polygon(pts) or signed_area2(pts) <= 0:
        return False
    P = G.points
    n = len(pts)
    for k in range(n):
        kind_reflex = orient(pts[k - 1], pts[k], pts[(k + 1) % n]) < 0
        if kind_reflex != (ids[k] is not None):
            return False
        if ids[k] is None:
            if G.on_any_edge(pts[k]) or G.face_at(pts[k]) != f:
                return False
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        ts = {mpq(0), mpq(1)}
        for u, v in G.edges:
            pu, pv = P[u], P[v]
            if (orient(a, b, pu) * orient(a, b, pv) < 0
                    and orient(pu, pv, a) * orient(pu, pv, b) < 0):
                return False
        for q in P:
            if on_segment(q, a, b):
                ts.add(segment_param(a, b, q))
        ts = sorted(ts)
        for t0, t1 in zip(ts, ts[1:]):
            m = lerp(a, b, (t0 + t1) / 2)
            if not G.on_any_edge(m) and G.face_at(m) != f:
                return False
    return True


def simplify_face(G: Pslg, f: int) -> tuple[FacePolygon, object]:
    corners = [(c, G.corner_kind(*c)) for c in G.faces[f].corners()]
    P = G.points
    walk = G.faces[f].walk
    lens = [l1_norm(sub(P[walk[k]], P[walk[(k + 1) % len(walk)]])) for k in range(len(walk))]
    eps = min(lens) / 8
    for _ in range(200):
        pts, ids = [], []
        for (prev, v, nxt), kind in corners:
            if kind == REFLEX:
                pts.append(P[v])
                ids.append(v)
            elif kind == CONVEX:
                pts.append(_inset(G, prev, v, nxt, eps))
                ids.append(None)
        if _polygon_ok(G, f, pts, ids):
            return FacePolygon(f, tuple(pts), tuple(ids)), eps
        eps /= 2
    raise PslgError(f"could not simplify face {f}")


def simplify(G: Pslg) -> Simplification:
    """One simple polygon per bounded face keeping exactly its reflex vertices."""
    polys = []
    eps = {}
    for f in G.bounded_faces:
        poly, e = simplify_face(G, f)
        polys.append(poly)
        eps[f] = e
    return Simplification(tuple(polys), eps)


# -- gluing a whole matching ---------------------------------------------------

MAX_HALVINGS = 80


def _first_boundary_hit(G: Pslg, free, origin, direction, skip_key=None):
    """First point where the ray leaves origin and meets the graph or a free segment.

    Returns ``(t, kind, ref)`` with kind one of ``"vertex"``, ``"edge"``,
    ``"free"``.
    """
    P = G.points
    best = None
    for u, v in G.edges:
        t = ray_segment_hit(origin, direction, P[u], P[v])
        if t is not None and (best is None or t < best[0]):
            best = (t, "edge", (u, v))
    for s in free:
        if s.key == skip_key:
            continue
        t = ray_segment_hit(origin, direction, s.red, s.blue)
        if t is not None and (best is None or t < best[0]):
            best = (t, "free", s.key)
    if best is None:
        raise PslgError("ray escapes the graph")
    t, kind, ref = best
    hit = add(origin, scale(direction, t))
    if kind == "edge":
        if hit in G.index:
            return t, "vertex", G.index[hit], hit
        return t, kind, ref, hit
    return t, kind, ref, hit


def attachment_candidates(G: Pslg, free, kind, ref, hit, side=None):
    """Points near a ray hit, on the element that was hit.

    Yields ``(t, Loc)`` pairs ordered by decreasing distance from the hit; the
    caller halts at the first one that works.  ``side`` restricts endpoints
    to one side: a callable returning True for acceptable directions.
    """
    P = G.points
    targets = []
    if kind == "edge":
        targets = [(P[w], ("edge", ref)) for w in ref]
    elif kind == "free":
        s = _free_by_key(free, ref)
        targets = [(s.red, ("free", ref)), (s.blue, ("free", ref))]
    elif kind == "vertex":
        targets = [(P[w], ("edge", (ref, w))) for w in G.neighbors[ref]]
    targets = [tg for tg in targets if side is None or side(tg[0])]
    t = mpq(1, 2)
    for _ in range(MAX_HALVINGS):
        for end, (k, r) in targets:
            q = lerp(hit, end, t)
            if k == "free":
                yield t, Loc(q, segment=r)
            else:
                yield t, Loc(q, edge=(min(r), max(r)))
        t /= 2


def glue_matching(X: Pslg, free: Sequence[BiSegment]) -> Pslg:
    """Glue every free segment to the boundary, rightmost endpoint first.

    Afterwards all segment endpoints are reflex vertices and the segments
    lie on the graph boundary.
    """
    G = X
    free = tuple(free)
    while free:
        s = max(free, key=lambda s: max(s.red[0], s.blue[0]))
        q, p = (s.red, s.blue) if s.red[0] > s.blue[0] else (s.blue, s.red)
        _, kind, ref, hit = _first_boundary_hit(G, free, q, sub(q, p), skip_key=s.key)
        if kind == "free":
            raise GlueCutError("extension hit another free segment")
        m = midpoint(s.red, s.blue)
        zloc = Loc(m, segment=s.key)
        done = False
        if kind == "vertex" and ref not in G.reflex:
            loc = Loc(hit, vertex=ref)
            if _whole_visible(G, free, s, hit) and color_visible(G, free, zloc, loc):
                G = glue(G, free, zloc, loc, check=False)
                done = True
        if not done:
            for _, loc in attachment_candidates(G, free, kind, ref, hit):
                if _whole_visible(G, free, s, loc.point) and color_visible(G, free, zloc, loc):
                    G = glue(G, free, zloc, loc, check=False)
                    done = True
                    break
        if not done:
            raise GlueCutError(f"no attachment point found for segment {s.key}")
        free = remove_free(free, s.key)
    return G


def _whole_visible(G, free, s: BiSegment, q) -> bool:
    return (visible(G, free, q, s.red) and visible(G, free, q, s.blue)
            and visible(G, free, q, midpoint(s.red, s.blue)))
