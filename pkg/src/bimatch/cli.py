"""``bimatch`` command line.

Exit codes: 0 ok, 2 parse error, 3 precondition failure (e.g. general
position), 4 invalid matching, 5 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from .explorer import CapExceededError, analyze, build_graph, lower_bound_instance
from .hamsandwich import format_tree, ham_sandwich_matching, tree_lines
from .io import (
    ParseError,
    format_matching,
    format_sequence,
    parse_matching,
    parse_points,
    read_text,
    write_text,
)
from .matching import GeneralPositionError, validate_matching
from .reconfig import connect, verify_sequence
from .svg import render_sequence, render_svg, write_svg

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_MATCHING, EXIT_CAP = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _load_points(path: str):
    try:
        text = read_text(path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    try:
        return parse_points(text)
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    except GeneralPositionError as exc:
        raise CliError(EXIT_PRECONDITION, f"{path}: {exc}") from None


def _load_matching(path: str, P):
    try:
        n, M = parse_matching(read_text(path))
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    if n != P.n:
        raise CliError(EXIT_MATCHING, f"{path}: matching is for n={n}, points have n={P.n}")
    try:
        rep = validate_matching(P, M)
    except IndexError as exc:
        raise CliError(EXIT_MATCHING, f"{path}: {exc}") from None
    if not rep:
        raise CliError(EXIT_MATCHING, f"{path}: invalid matching ({rep.kind}): {rep.witness}")
    return M


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_hs_match(args) -> int:
    P = _load_points(args.points)
    H = ham_sandwich_matching(P)
    tree = "".join(f"# {line}\n" for line in format_tree(H.tree).splitlines())
    if args.out:
        write_text(args.out, format_matching(H.matching, P.n))
        sys.stdout.write(tree)
    else:
        sys.stdout.write(format_matching(H.matching, P.n) + tree)
    if args.svg:
        write_svg(args.svg, render_svg(P, [H.matching], tree_lines(H.tree)))
    return EXIT_OK


def cmd_connect(args) -> int:
    P = _load_points(args.points)
    M = _load_matching(args.matching, P)
    seq = connect(P, M)
    rep = verify_sequence(P, seq)
    if not rep:     # pragma: no cover - would be a bug in the construction
        raise CliError(1, f"internal error: step {rep.index}: {rep.reason}")
    _emit(format_sequence(seq.matchings, P.n, os.path.basename(args.points)), args.out)
    # "steps" counts matchings, as in the sequence header
    print(f"steps: {len(seq)} (moves: {len(seq) - 1})",
          file=sys.stderr if not args.out else sys.stdout)
    if args.svg_dir:
        render_sequence(P, seq.matchings, args.svg_dir,
                        tree_lines(ham_sandwich_matching(P).tree))
    return EXIT_OK


def _resolve(token: str, G, named: dict):
    if token in named:
        return named[token]
    if token.isdigit():
        k = int(token)
        if k >= len(G.nodes):
            raise CliError(EXIT_PRECONDITION, f"node {k} out of range (0..{len(G.nodes) - 1})")
        return G.nodes[k]
    return _load_matching(token, G.P)


def cmd_explore(args) -> int:
    named = {}
    if args.lower_bound is not None:
        if args.lower_bound < 1:
            raise CliError(EXIT_PRECONDITION, "--lower-bound needs n >= 1")
        inst = lower_bound_instance(args.lower_bound)
        P = inst.P
        named = {"M": inst.M, "M'": inst.M2, "M2": inst.M2}
    elif args.points:
        P = _load_points(args.points)
    else:
        raise CliError(EXIT_PARSE, "give a point file or --lower-bound N")
    try:
        G = build_graph(P)
    except CapExceededError as exc:
        raise CliError(EXIT_CAP, str(exc)) from None
    A = analyze(G)
    lines = [f"n: {P.n}", f"matchings: {len(G.nodes)}",
             f"edges: {int(G.adj.sum()) // 2}",
             f"connected: {'yes' if A.connected else 'no'}"]
    if args.diameter:
        lines.append(f"diameter: {A.diameter if A.connected else 'infinite'}")
    if args.distance:
        a = _resolve(args.distance[0], G, named)
        b = _resolve(args.distance[1], G, named)
        d = A.distance(G, a, b)
        lines.append(f"distance {args.distance[0]} {args.distance[1]}: "
                     f"{d if d >= 0 else 'infinite'}")
    print("\n".join(lines))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_PARSE, message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bimatch", description="Compatible bichromatic matchings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    hs = sub.add_parser("hs-match", help="ham-sandwich matching and its cut tree")
    hs.add_argument("points")
    hs.add_argument("-o", "--out")
    hs.add_argument("--svg", help="write a drawing to this file")
    hs.set_defaults(func=cmd_hs_match)

    co = sub.add_parser("connect", help="compatible sequence to the ham-sandwich matching")
    co.add_argument("points")
    co.add_argument("matching")
    co.add_argument("-o", "--out")
    co.add_argument("--svg-dir", help="write one drawing per step into this directory")
    co.set_defaults(func=cmd_connect)

    ex = sub.add_parser("explore", help="brute-force compatible matching graph")
    ex.add_argument("points", nargs="?")
    ex.add_argument("--lower-bound", type=int, metavar="N")
    ex.add_argument("--diameter", action="store_true")
    ex.add_argument("--distance", nargs=2, metavar=("A", "B"),
                    help="node index, matching file, or M / M' with --lower-bound")
    ex.set_defaults(func=cmd_explore)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"bimatch: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":     # pragma: no cover
    sys.exit(main())
