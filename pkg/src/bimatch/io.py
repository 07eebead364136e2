"""Plain-text formats for point sets, matchings and matching sequences.

Point file::

    # comment
    0 0 R
    1/2 3.25 B

Reds and blues are numbered separately in order of appearance.  Matching
files hold ``n`` and then ``r b`` lines.  Sequence files start with
``SEQ v1 n=<n> steps=<k>`` and hold k matching blocks separated by ``--``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .geom import Color, GeometryError, format_scalar, to_scalar
from .matching import BichromaticPointSet, BRMatching, GeneralPositionError


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield no, s


def parse_points(text: str) -> BichromaticPointSet:
    """Raises :class:`ParseError` for bad syntax and
    :class:`GeneralPositionError` for a bad configuration."""
    reds, blues = [], []
    for no, s in _lines(text):
        parts = s.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'x y color', got {s!r}", no)
        try:
            x, y = to_scalar(parts[0]), to_scalar(parts[1])
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(f"bad coordinate ({exc})", no) from None
        c = parts[2].upper()
        if c not in ("R", "B"):
            raise ParseError(f"color must be R or B, got {parts[2]!r}", no)
        (reds if c == "R" else blues).append((x, y))
    if len(reds) != len(blues):
        raise GeneralPositionError(f"unbalanced colors: {len(reds)} red vs {len(blues)} blue")
    return BichromaticPointSet.from_coords(reds, blues)


def format_points(P: BichromaticPointSet) -> str:
    out = []
    for p in P.reds:
        out.append(f"{format_scalar(p[0])} {format_scalar(p[1])} R")
    for p in P.blues:
        out.append(f"{format_scalar(p[0])} {format_scalar(p[1])} B")
    return "\n".join(out) + "\n"


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", no) from None


def _parse_pairs(items, n: int | None) -> BRMatching:
    pairs = []
    for no, s in items:
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'r b', got {s!r}", no)
        pairs.append((_int(parts[0], no), _int(parts[1], no)))
    return BRMatching.of(pairs)


def parse_matching(text: str) -> tuple[int, BRMatching]:
    items = list(_lines(text))
    if not items:
        raise ParseError("empty matching file")
    no, first = items[0]
    if len(first.split()) != 1:
        raise ParseError("first line must hold n", no)
    n = _int(first, no)
    return n, _parse_pairs(items[1:], n)


def format_matching(M: BRMatching, n: int | None = None) -> str:
    n = len(M) if n is None else n
    return f"{n}\n" + "".join(f"{r} {b}\n" for r, b in M.pairs)


@dataclass
class SequenceFile:
    n: int
    matchings: list[BRMatching]
    points: str | None = None


_HEADER = re.compile(r"^SEQ v1 n=(\d+) steps=(\d+)(?: points=(\S+))?$")


def parse_sequence(text: str) -> SequenceFile:
    items = list(_lines(text))
    if not items:
        raise ParseError("empty sequence file")
    no, head = items[0]
    m = _HEADER.match(head)
    if not m:
        raise ParseError("expected header 'SEQ v1 n=<n> steps=<k>'", no)
    n, k = int(m.group(1)), int(m.group(2))
    blocks: list[list] = [[]]
    for no, s in items[1:]:
        if s == "--":
            blocks.append([])
        else:
            blocks[-1].append((no, s))
    if len(blocks) != k:
        raise ParseError(f"header announces {k} matchings, found {len(blocks)}")
    return SequenceFile(n, [_parse_pairs(b, n) for b in blocks], m.group(3))


def format_sequence(ms: Sequence[BRMatching], n: int, points: str | None = None) -> str:
    head = f"SEQ v1 n={n} steps={len(ms)}"
    if points:
        head += f" points={points}"
    blocks = ["".join(f"{r} {b}\n" for r, b in M.pairs) for M in ms]
    return head + "\n" + "--\n".join(blocks)


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
