"""Removing crossings with a cut line, and connecting any matching to the
ham-sandwich matching.

``build_extension`` grows a glue-cut graph around the matching so that the
crossings below some segment ``s_j`` become isolated vertices, which forces
a re-matching of the reflex vertices to keep clear of the cut below ``s_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from gmpy2 import mpq

from .geom import (
    Color,
    GeometryError,
    Line,
    Location,
    Point,
    add,
    cross,
    dot,
    lerp,
    midpoint,
    on_segment,
    point_in_simple_polygon,
    scale,
    segment_line_intersection,
    segment_polygon_disjoint,
    sub,
)
from .gcg import (
    BiSegment,
    GlueCutError,
    Loc,
    Pslg,
    _corner_half_edge,
    _first_boundary_hit,
    color_visible,
    color_viewed_from,
    gcg_violations,
    glue,
    glue_cut,
    glue_matching,
    locate,
    polygon_graph,
    remove_free,
    visible,
)
from .hamsandwich import CutLeaf, CutNode, CutTree, ham_sandwich_matching
from .matching import (
    BichromaticPointSet,
    BRMatching,
    ChiMeasure,
    Crossing,
    InvalidMatchingError,
    chi,
    compatible,
    crossing_list,
    is_chromatic_cut,
    validate_matching,
)
from .reflex_match import gcg_matching_labels, match_reflex_in_gcg

MAX_HALVINGS = 80


class ReconfigError(GeometryError):
    """Internal failure of the construction (should never happen)."""


class NotChromaticError(ValueError):
    pass


# -- isolated vertices ---------------------------------------------------------

def _gap_vs_pi(a, b, single: bool) -> int:
    """Compare the counterclockwise angle from a to b with pi (-1, 0, 1)."""
    if single:
        return 1
    c = cross(a, b)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0 if dot(a, b) < 0 else 1


def line_meets_interior(G: Pslg, p, direction) -> bool:
    """Does the line through p with this direction pass through a bounded face?"""
    P = G.points
    dd = dot(direction, direction)
    ts = set()
    for u, v in G.edges:
        for q in (P[u], P[v]):
            if cross(sub(q, p), direction) == 0:
                ts.add(dot(sub(q, p), direction) / dd)
        den = cross(direction, sub(P[v], P[u]))
        if den != 0:
            s = cross(sub(P[u], p), direction) / den
            if 0 <= s <= 1:
                ts.add(cross(sub(P[u], p), sub(P[v], P[u])) / den)
    if not ts:
        return False
    ts = sorted(ts)
    probes = [(a + b) / 2 for a, b in zip(ts, ts[1:])]
    for t in probes:
        q = add(p, scale(direction, t))
        if not G.on_any_edge(q) and G.face_at(q) is not None:
            return True
    return False


def is_isolated(G: Pslg, v: int) -> bool:
    """No line through v that meets the interior of G has all of v's
    neighbors in one closed halfplane."""
    P = G.points
    nb = G.neighbors[v]
    if not nb:
        raise ValueError("vertex has no neighbors")
    pv = P[v]
    dirs = [sub(P[w], pv) for w in nb]
    k = len(dirs)
    for i in range(k):
        a, b = dirs[i], dirs[(i + 1) % k]
        g = _gap_vs_pi(a, b, k == 1)
        if g < 0:
            continue
        if g == 0:
            if line_meets_interior(G, pv, a):
                return False
            continue
        # a whole fan of supporting lines; inside a bounded face some of them
        # enter the interior right at v
        mid = scale(add(scale(a, 1 / _l1(a)), scale(b, 1 / _l1(b))), -1)
        if k == 1:
            mid = scale(a, -1)
        for f in G.bounded_faces:
            if _corner_half_edge(G, v, f, mid) is not None:
                return False
        for d in (a, b, mid):
            if line_meets_interior(G, pv, d):
                return False
    return True


def _l1(v):
    return abs(v[0]) + abs(v[1])


# -- the enclosing polygon -------------------------------------------------------

def enclosing_octagon(points: Sequence[Point]) -> list[Point]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1
    # every point is at L1 distance >= 2 from a box corner, so clipping a
    # unit triangle off each corner keeps them strictly inside
    cx = cy = mpq(1)
    return [Point(x0 + cx, y0), Point(x1 - cx, y0), Point(x1, y0 + cy), Point(x1, y1 - cy),
            Point(x1 - cx, y1), Point(x0 + cx, y1), Point(x0, y1 - cy), Point(x0, y0 + cy)]


def _lowest_boundary_point(R: Pslg, line: Line) -> Loc:
    P = R.points
    best = None
    for u, v in R.edges:
        x = segment_line_intersection((P[u], P[v]), line)
        if x is None:
            continue
        if best is None or line.param(x) < line.param(best[0]):
            best = (x, (u, v))
    for v, q in enumerate(P):
        if line.side(q) == 0 and (best is None or line.param(q) < line.param(best[0])):
            best = (q, None)
    if best is None:
        raise ReconfigError("cut line misses the enclosing polygon")
    x, e = best
    if x in R.index:
        return Loc(x, vertex=R.index[x])
    return Loc(x, edge=e)


# -- augment state ---------------------------------------------------------------

@dataclass(frozen=True)
class AugmentState:
    P: BichromaticPointSet
    M: BRMatching
    line: Line
    G: Pslg
    i: int                              # 1-based index of the current crossing
    crossings: tuple[Crossing, ...]     # s_1..s_k bottom to top
    free: tuple[BiSegment, ...]
    xs: tuple[Point, ...]               # x_0 .. x_i

    @property
    def k(self) -> int:
        return len(self.crossings)

    def s(self, i: int) -> Crossing:
        return self.crossings[i - 1]

    def x(self, i: int) -> Point:
        return self.xs[i] if i < len(self.xs) else self.crossings[i - 1].point

    def ends(self, i: int) -> tuple[Point, Point]:
        """(left, right) endpoints of s_i relative to the cut line."""
        r, b = self.s(i).pair
        red, blue = self.P.reds[r], self.P.blues[b]
        return (red, blue) if self.line.side(red) < 0 else (blue, red)

    def vertex(self, p) -> int:
        return self.G.index[p]


def _free_segments(P: BichromaticPointSet, M: BRMatching) -> tuple[BiSegment, ...]:
    return tuple(BiSegment(P.reds[r], P.blues[b], (r, b)) for r, b in M.pairs)


def init_augment(P: BichromaticPointSet, M: BRMatching, line: Line) -> AugmentState:
    """Glue the lowest crossing segment to the bottom of an enclosing polygon."""
    if not is_chromatic_cut(P, M, line):
        raise NotChromaticError("line is not a chromatic cut of the matching")
    cl = crossing_list(P, M, line)
    R = polygon_graph(enclosing_octagon(P.reds + P.blues))
    x0 = _lowest_boundary_point(R, line)
    free = _free_segments(P, M)
    s1 = cl[0]
    z = Loc(s1.point, segment=s1.pair)
    G = glue(R, free, z, x0)
    return AugmentState(P, M, line, G, 1, cl, remove_free(free, s1.pair), (x0.point, s1.point))


def _above_test(state: AugmentState, i: int):
    l, r = state.ends(i)
    ls = Line.through(l, r)
    ref = ls.side(add(state.x(i), state.line.direction))
    return lambda q: ls.side(q) == ref


def _side_hit(state: AugmentState, i: int, left: bool):
    """First element hit when extending s_i beyond its left or right endpoint."""
    l, r = state.ends(i)
    origin, other = (l, r) if left else (r, l)
    return _first_boundary_hit(state.G, state.free, origin, sub(origin, other))


def _near_points(state: AugmentState, kind, ref, hit, above):
    """Locations on the hit element approaching ``hit`` from above."""
    G = state.G
    P = G.points
    if kind == "free":
        s = next(s for s in state.free if s.key == ref)
        ends = [(e, None) for e in (s.red, s.blue) if above(e)]
    elif kind == "edge":
        ends = [(P[w], ref) for w in ref if above(P[w])]
    else:
        ends = [(P[w], (min(ref, w), max(ref, w))) for w in G.neighbors[ref] if above(P[w])]
    t = mpq(1, 2)
    for _ in range(MAX_HALVINGS):
        for e, edge in ends:
            q = lerp(hit, e, t)
            if kind == "free":
                yield Loc(q, segment=ref)
            else:
                yield Loc(q, edge=edge)
        t /= 2


@dataclass(frozen=True)
class Escape:
    loc: Loc
    via: str            # "next", "left" or "right"


def find_escape(state: AugmentState) -> Escape | None:
    """A point above the line of s_i that is color-visible with x_i.

    Tried in order: x_{i+1}, then points just above y_L on s_L, then just
    above y_R on s_R.
    """
    G, free, i = state.G, state.free, state.i
    xi = Loc(state.x(i), vertex=state.vertex(state.x(i)))
    if i < state.k:
        loc = locate(G, free, state.x(i + 1))
        if loc.vertex is None or loc.vertex not in G.reflex:
            if color_visible(G, free, xi, loc):
                return Escape(loc, "next")
    above = _above_test(state, i)
    l, r = state.ends(i)
    for left in (True, False):
        _, kind, ref, hit = _side_hit(state, i, left)
        for loc in _near_points(state, kind, ref, hit, above):
            if (visible(G, free, xi.point, loc.point) and visible(G, free, l, loc.point)
                    and visible(G, free, r, loc.point)):
                if color_visible(G, free, xi, loc):
                    return Escape(loc, "left" if left else "right")
                break
    return None


def _attach_extension(d, free, kind, ref, hit):
    """Add the hit point to the draft; glue a free segment that was hit."""
    if kind == "free":
        s = next(s for s in free if s.key == ref)
        a = d.add_vertex(s.red, Color.RED, s.key[0])
        b = d.add_vertex(s.blue, Color.BLUE, s.key[1])
        y = d.add_vertex(hit)
        d.add_edge(y, a)
        d.add_edge(y, b)
        return y, remove_free(free, ref)
    if kind == "vertex":
        return ref, free
    return d.split_edge(_current_edge(d, ref, hit), hit), free


def augment_step(state: AugmentState, check: bool = False) -> AugmentState:
    """Extend s_i to both sides, then glue or cut x_{i+1} to x_i."""
    i = state.i
    if i >= state.k:
        raise ReconfigError("no segment above the current one")
    G, free = state.G, state.free
    l, r = state.ends(i)
    _, kl, refl, yl = _side_hit(state, i, True)
    _, kr, refr, yr = _side_hit(state, i, False)
    d = G.draft()
    vl, free = _attach_extension(d, free, kl, refl, yl)
    vr, free = _attach_extension(d, free, kr, refr, yr)
    d.add_edge(d.index[l], vl)
    d.add_edge(d.index[r], vr)
    X = d.freeze()
    xi = Loc(state.x(i), vertex=X.index[state.x(i)])
    nxt = locate(X, free, state.x(i + 1))
    try:
        G2, free2 = glue_cut(X, free, nxt, xi)
    except GlueCutError as exc:
        raise ReconfigError(f"augment step {i}: {exc}") from exc
    new = replace(state, G=G2, free=free2, i=i + 1, xs=state.xs + (state.x(i + 1),))
    if check:
        bad = state_violations(new)
        if bad:
            raise ReconfigError(f"augment step {i}: " + "; ".join(bad))
    return new


def _current_edge(d, edge, p):
    """The draft edge containing p (an earlier split may have replaced it)."""
    u, v = edge
    if (min(u, v), max(u, v)) in d.edges:
        return (u, v)
    for a, b in d.edges:
        if on_segment(p, d.points[a], d.points[b]) and p != d.points[a] and p != d.points[b]:
            return (a, b)
    raise ReconfigError("lost track of an edge")


def state_violations(state: AugmentState) -> list[str]:
    """Check the invariants maintained across augment steps."""
    out = []
    G, free, i = state.G, state.free, state.i
    out += gcg_violations(G)
    xi = state.x(i)
    if xi not in G.index:
        return out + [f"x_{i} is not a vertex"]
    vi = G.index[xi]
    prev = state.xs[i - 1]
    if prev not in G.index or G.index[prev] not in G.neighbors[vi]:
        out.append(f"x_{i} does not neighbor x_{i - 1}")
    if i < state.k and not visible(G, free, xi, state.x(i + 1)):
        out.append(f"x_{i} and x_{i + 1} are not visible")
    l, r = state.ends(i)
    sides = set()
    for w in G.neighbors[vi]:
        q = G.points[w]
        if q != prev and on_segment(q, l, r):
            sides.add(state.line.side(q))
    if sides != {-1, 1}:
        out.append(f"x_{i} lacks a neighbor on each side of s_{i}")
    for e in (l, r):
        if e not in G.index or G.index[e] not in G.reflex:
            out.append(f"endpoint {e} of s_{i} is not reflex")
    if i >= 2:
        pl, pr = state.ends(i - 1)
        if any(G.index.get(e) in G.reflex for e in (pl, pr)):
            out.append(f"an endpoint of s_{i - 1} is still reflex")
        if not is_isolated(G, G.index[prev]):
            out.append(f"x_{i - 1} is not isolated")
    y = _point_above(state)
    if y is not None:
        seen = color_viewed_from(G, free, Loc(xi, vertex=vi), y)
        want = Color.RED if r in state.P.reds else Color.BLUE
        if seen != want:
            out.append(f"s_{i} seen from above is {seen}, expected {want}")
    return out


def _point_above(state: AugmentState):
    xi = state.x(state.i)
    d = state.line.direction
    t = mpq(1)
    for _ in range(MAX_HALVINGS):
        y = add(xi, scale(d, t))
        if visible(state.G, state.free, xi, y):
            return y
        t /= 2
    return None


# -- the extension -------------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    G: Pslg
    free: tuple[BiSegment, ...]
    j: int
    x_j: Point
    escape: Escape
    augment_steps: int
    state: AugmentState


def build_extension(P: BichromaticPointSet, M: BRMatching, line: Line,
                    check: bool = False) -> Extension:
    state = init_augment(P, M, line)
    if check:
        bad = state_violations(state)
        if bad:
            raise ReconfigError("initial state: " + "; ".join(bad))
    steps = 0
    while True:
        esc = find_escape(state)
        if esc is not None:
            break
        state = augment_step(state, check=check)
        steps += 1
    j = state.i
    xj = state.x(j)
    G, free = glue_cut(state.G, state.free, esc.loc, Loc(xj, vertex=state.vertex(xj)))
    return Extension(G, free, j, xj, esc, steps, state)


def extension_violations(ext: Extension, G: Pslg | None = None) -> list[str]:
    """Properties the extension must have before re-matching.

    ``G`` defaults to the extension graph; pass the graph after all
    remaining segments were glued to check that too.
    """
    G = G or ext.G
    st = ext.state
    out = list(gcg_violations(G))
    polys = [list(fp.points) for fp in G.simplification.polygons]
    for e in st.ends(ext.j):
        if G.index.get(e) not in G.reflex:
            out.append(f"endpoint {e} of s_j is not reflex")
    for i in range(1, ext.j + 1):
        xi = st.x(i)
        if any(point_in_simple_polygon(poly, xi, check=False) is not Location.OUTSIDE
               for poly in polys):
            out.append(f"x_{i} is not outside the simplification")
        if i < ext.j and any(G.index.get(e) in G.reflex for e in st.ends(i)):
            out.append(f"an endpoint of s_{i} is reflex")
    x0 = st.xs[0]
    if not all(segment_polygon_disjoint(poly, ext.x_j, x0) for poly in polys):
        out.append("the cut below x_j meets the simplification")
    return out


# -- one step and the whole procedure ---------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    before: BRMatching
    after: BRMatching
    extension: Extension
    glued: Pslg
    dropped: tuple[int, int]
    kept: tuple[tuple[int, int], ...]     # s_1..s_{j-1}


def next_matching_step(P: BichromaticPointSet, M: BRMatching, line: Line,
                       check: bool = False) -> StepRecord:
    ext = build_extension(P, M, line, check=check)
    G = glue_matching(ext.G, ext.free)
    if check:
        bad = extension_violations(ext, G)
        if bad:
            raise ReconfigError("; ".join(bad))
    W = gcg_matching_labels(G, match_reflex_in_gcg(G))
    Z = tuple(c.pair for c in ext.state.crossings[:ext.j - 1])
    M2 = BRMatching.of(list(W.pairs) + list(Z))
    return StepRecord(M, M2, ext, G, ext.state.s(ext.j).pair, Z)


def next_matching(P: BichromaticPointSet, M: BRMatching, line: Line) -> BRMatching:
    """A compatible matching dropping some crossing s_j and keeping the
    crossings below it unchanged."""
    return next_matching_step(P, M, line).after


def contract_violations(P: BichromaticPointSet, line: Line, rec: StepRecord) -> list[str]:
    """Clauses every single step must satisfy, checked directly."""
    out = []
    M, M2 = rec.before, rec.after
    rep = validate_matching(P, M2)
    if not rep:
        return [f"result is not a matching: {rep.kind} {rep.witness}"]
    if not compatible(P, M, M2, check=False):
        out.append("result is not compatible")
    if rec.dropped in M2:
        out.append("s_j was kept")
    xj = rec.extension.x_j
    below = {c.pair for c in crossing_list(P, M2, line) if line.param(c.point) < line.param(xj)}
    lost = set(rec.kept) - below
    if lost:
        out.append(f"crossings below s_j were not preserved: {sorted(lost)}")
    new = below - set(rec.kept)
    if new:
        out.append(f"new crossings below s_j: {sorted(new)}")
    return out


@dataclass(frozen=True)
class AvoidCutRun:
    points: BichromaticPointSet
    line: Line
    matchings: tuple[BRMatching, ...]        # local to the run's point set
    chis: tuple[ChiMeasure, ...]
    steps: tuple[StepRecord, ...]


@dataclass
class ReconfigSequence:
    matchings: list[BRMatching]
    runs: list[AvoidCutRun] = field(default_factory=list)

    def __len__(self):
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    def __getitem__(self, k):
        return self.matchings[k]

    @property
    def first(self) -> BRMatching:
        return self.matchings[0]

    @property
    def last(self) -> BRMatching:
        return self.matchings[-1]


def avoid_cut(P: BichromaticPointSet, M: BRMatching, line: Line,
              check: bool = False) -> ReconfigSequence:
    """Steps until no segment crosses the line; the potential strictly drops.

    The line should be a ham-sandwich cut of P: then every intermediate
    matching either misses it or is cut chromatically.
    """
    ms = [M]
    chis = [chi(P, line, M)]
    steps = []
    while crossing_list(P, ms[-1], line):
        rec = next_matching_step(P, ms[-1], line, check=check)
        c = chi(P, line, rec.after)
        if not c < chis[-1]:
            raise ReconfigError("crossing potential did not decrease")
        ms.append(rec.after)
        chis.append(c)
        steps.append(rec)
    run = AvoidCutRun(P, line, tuple(ms), tuple(chis), tuple(steps))
    return ReconfigSequence(ms, [run])


def merge_sequences(a: Sequence[BRMatching], b: Sequence[BRMatching]) -> list[BRMatching]:
    """Union step by step, padding the shorter sequence with its last element."""
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = a[min(k, len(a) - 1)]
        y = b[min(k, len(b) - 1)]
        out.append(BRMatching.of(x.pairs + y.pairs))
    return out


def _connect_node(P: BichromaticPointSet, node: CutTree, pairs: frozenset,
                  runs: list, check: bool) -> list[BRMatching]:
    if isinstance(node, CutLeaf):
        return [BRMatching.of(pairs)]
    reds, blues = node.reds, node.blues
    rpos = {g: k for k, g in enumerate(reds)}
    bpos = {g: k for k, g in enumerate(blues)}
    sub_P = P.subset(reds, blues)
    local = BRMatching.of((rpos[r], bpos[b]) for r, b in pairs)
    seq = avoid_cut(sub_P, local, node.cut.line, check=check)
    runs.extend(seq.runs)
    to_global = [frozenset((reds[r], blues[b]) for r, b in m.pairs) for m in seq.matchings]
    final = to_global[-1]
    line = node.cut.line
    pos = frozenset(p for p in final if line.side(P.reds[p[0]]) > 0)
    neg = final - pos
    a = _connect_node(P, node.positive, pos, runs, check)
    b = _connect_node(P, node.negative, neg, runs, check)
    merged = merge_sequences(a, b)
    head = [BRMatching.of(m) for m in to_global]
    return head + merged[1:]


def connect(P: BichromaticPointSet, M: BRMatching, check: bool = False) -> ReconfigSequence:
    """Compatible steps from M to the ham-sandwich matching of P."""
    rep = validate_matching(P, M)
    if not rep:
        raise InvalidMatchingError(f"invalid matching ({rep.kind}): {rep.witness}")
    H = ham_sandwich_matching(P)
    runs: list = []
    ms = _connect_node(P, H.tree, frozenset(M.pairs), runs, check)
    # drop immediate repeats introduced by padding
    out = [ms[0]]
    for m in ms[1:]:
        if m != out[-1]:
            out.append(m)
    return ReconfigSequence(out, runs)


def connect_pair(P: BichromaticPointSet, M1: BRMatching, M2: BRMatching,
                 check: bool = False) -> ReconfigSequence:
    """Route M1 to the ham-sandwich matching, then back out to M2."""
    a = connect(P, M1, check)
    b = connect(P, M2, check)
    ms = a.matchings + list(reversed(b.matchings))[1:]
    out = [ms[0]]
    for m in ms[1:]:
        if m != out[-1]:
            out.append(m)
    return ReconfigSequence(out, a.runs + b.runs)


@dataclass(frozen=True)
class SequenceReport:
    ok: bool
    index: int = -1
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_sequence(P: BichromaticPointSet, seq) -> SequenceReport:
    """Every element is a valid matching and neighbors are compatible."""
    ms = list(seq)
    if not ms:
        return SequenceReport(False, 0, "empty sequence")
    for k, m in enumerate(ms):
        try:
            rep = validate_matching(P, m)
        except IndexError as exc:
            return SequenceReport(False, k, str(exc))
        if not rep:
            return SequenceReport(False, k, f"{rep.kind}: {rep.witness}")
        if k and not compatible(P, ms[k - 1], m, check=False):
            return SequenceReport(False, k, "not compatible with the previous matching")
    return SequenceReport(True)
