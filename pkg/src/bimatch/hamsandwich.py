"""Ham-sandwich cuts (lines through no input point) and recursive matchings."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

from gmpy2 import mpq

from .geom import Color, Line, Point, add, midpoint, sub
from .matching import BichromaticPointSet, BRMatching


@dataclass(frozen=True)
class HamSandwichCut:
    line: Line
    side_counts: tuple[int, int, int, int]   # blue_pos, red_pos, blue_neg, red_neg


@dataclass(frozen=True)
class CutLeaf:
    red: int
    blue: int


@dataclass(frozen=True)
class CutNode:
    cut: HamSandwichCut
    reds: tuple[int, ...]        # global indices handled by this node
    blues: tuple[int, ...]
    positive: "CutTree"
    negative: "CutTree"


CutTree = Union[CutNode, CutLeaf]


@dataclass(frozen=True)
class HamSandwichMatching:
    matching: BRMatching
    tree: CutTree


def _side_counts(P: BichromaticPointSet, line: Line):
    bp = rp = bn = rn = 0
    for p in P.blues:
        s = line.side(p)
        if s == 0:
            return None
        if s > 0:
            bp += 1
        else:
            bn += 1
    for p in P.reds:
        s = line.side(p)
        if s == 0:
            return None
        if s > 0:
            rp += 1
        else:
            rn += 1
    return bp, rp, bn, rn


def _is_cut(counts, k: int) -> bool:
    if counts is None:
        return False
    bp, rp, bn, rn = counts
    return (bp == k and rp == k) or (bn == k and rn == k)


def _candidate_lines(P: BichromaticPointSet):
    pts = list(P.reds + P.blues)
    for p, q in combinations(pts, 2):
        base = Line.through(p, q)
        others = [abs(base.value(o)) for o in pts if o != p and o != q]
        eps = min(others) / 2 if others else mpq(1)
        # parallel shifts put p and q on the same side
        yield Line.from_coeffs(base.A, base.B, base.C + eps)
        yield Line.from_coeffs(base.A, base.B, base.C - eps)
        # small rotations about the midpoint separate p from q
        others_pts = [o for o in pts if o != p and o != q]
        want = [base.side(o) for o in others_pts]
        m = midpoint(p, q)
        d = sub(q, p)
        nrm = Point(-d[1], d[0])
        for sign in (1, -1):
            t = mpq(1, 2)
            while True:
                line = Line.point_direction(m, add(d, Point(nrm[0] * t * sign, nrm[1] * t * sign)))
                # normalization may flip the sign, so compare partitions
                got = [line.side(o) for o in others_pts]
                if got == want or got == [-v for v in want]:
                    yield line
                    break
                t /= 2
    xs = sorted({p[0] for p in pts})
    if len(xs) == 1:
        yield Line.vertical(xs[0] + 1)
    for a, b in zip(xs, xs[1:]):
        yield Line.vertical((a + b) / 2)


def find_ham_sandwich_cut(P: BichromaticPointSet) -> HamSandwichCut:
    """Least (by canonical coefficients) line through no point of P with
    floor(n/2) blue and floor(n/2) red points on one side."""
    k = P.n // 2
    best = None
    for line in _candidate_lines(P):
        counts = _side_counts(P, line)
        if _is_cut(counts, k) and (best is None or line.key() < best[0].key()):
            best = (line, counts)
    if best is None:   # pragma: no cover - existence is a theorem
        raise RuntimeError("no ham-sandwich cut found")
    return HamSandwichCut(best[0], best[1])


def is_ham_sandwich_cut(P: BichromaticPointSet, line: Line) -> bool:
    return _is_cut(_side_counts(P, line), P.n // 2)


def _build(P: BichromaticPointSet, reds: tuple, blues: tuple) -> CutTree:
    if len(reds) == 1:
        return CutLeaf(reds[0], blues[0])
    sub_set = P.subset(reds, blues)
    cut = find_ham_sandwich_cut(sub_set)
    line = cut.line
    pos_r = tuple(i for i in reds if line.side(P.reds[i]) > 0)
    neg_r = tuple(i for i in reds if line.side(P.reds[i]) < 0)
    pos_b = tuple(j for j in blues if line.side(P.blues[j]) > 0)
    neg_b = tuple(j for j in blues if line.side(P.blues[j]) < 0)
    return CutNode(cut, reds, blues, _build(P, pos_r, pos_b), _build(P, neg_r, neg_b))


def tree_pairs(tree: CutTree) -> list[tuple[int, int]]:
    if isinstance(tree, CutLeaf):
        return [(tree.red, tree.blue)]
    return tree_pairs(tree.positive) + tree_pairs(tree.negative)


def tree_lines(tree: CutTree) -> list[Line]:
    """Cut lines in pre-order."""
    if isinstance(tree, CutLeaf):
        return []
    return [tree.cut.line] + tree_lines(tree.positive) + tree_lines(tree.negative)


def tree_depth(tree: CutTree) -> int:
    if isinstance(tree, CutLeaf):
        return 0
    return 1 + max(tree_depth(tree.positive), tree_depth(tree.negative))


def ham_sandwich_matching(P: BichromaticPointSet) -> HamSandwichMatching:
    tree = _build(P, tuple(range(P.n)), tuple(range(P.n)))
    return HamSandwichMatching(BRMatching.of(tree_pairs(tree)), tree)


def format_tree(tree: CutTree, indent: int = 0) -> str:
    """Indented text listing of a cut tree."""
    pad = "  " * indent
    if isinstance(tree, CutLeaf):
        return f"{pad}leaf r{tree.red} b{tree.blue}\n"
    bp, rp, bn, rn = tree.cut.side_counts
    out = (f"{pad}cut {tree.cut.line!r} pos=(B{bp},R{rp}) neg=(B{bn},R{rn})\n")
    return out + format_tree(tree.positive, indent + 1) + format_tree(tree.negative, indent + 1)


__all__ = [
    "Color", "CutLeaf", "CutNode", "CutTree", "HamSandwichCut", "HamSandwichMatching",
    "find_ham_sandwich_cut", "ham_sandwich_matching", "is_ham_sandwich_cut",
    "format_tree", "tree_depth", "tree_lines", "tree_pairs",
]
