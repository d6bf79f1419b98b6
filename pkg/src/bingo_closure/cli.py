"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .closure import check_laws, closure, depth
from .constructions import (
    ConstructionError,
    catalog,
    construct_max_depth,
    get_board,
    verify_board,
)
from .grid import MAX_N, BoardParseError, CellSet, parse_board, render_board
from .search import (
    Scope,
    SearchTooLargeError,
    bound_sweep,
    lemma1_sweep,
    max_depth_exhaustive,
    max_depth_sampled,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_board(path: str) -> CellSet:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read board {path!r}: {exc.strerror}") from None
    _, cells = parse_board(text)
    return cells


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def cmd_closure(args) -> int:
    trace = closure(_read_board(args.board))
    if args.json:
        _emit_json(trace.to_dict())
    else:
        print(render_board(trace.final))
    return EXIT_OK


def cmd_depth(args) -> int:
    print(depth(_read_board(args.board)))
    return EXIT_OK


def cmd_trace(args) -> int:
    trace = closure(_read_board(args.board))
    if args.format == "json":
        _emit_json(trace.to_dict())
    else:
        print(trace.render(pretty=args.pretty))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.show is None:
        for board in catalog():
            print(f"{board.name}\tn={board.n}\tdepth={board.expected_depth}"
                  f"\tspanning={'yes' if board.expected_spanning else 'no'}")
        return EXIT_OK
    try:
        board = get_board(args.show)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if args.labels:
        print(render_board(board.occupied, board.labels, pretty=args.pretty))
    else:
        print(render_board(board.occupied))
    return EXIT_OK


def cmd_construct(args) -> int:
    width = args.ring_width if args.ring_width == "auto" else int(args.ring_width)
    try:
        board = construct_max_depth(args.n, width)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    trace = board.trace()
    if args.json:
        _emit_json(trace.to_dict())
    else:
        print(trace.render(pretty=args.pretty))
    return EXIT_OK


def _progress(done: int, total: int) -> None:
    if done == total or done % max(1, total // 20) == 0:
        print(f"search: {done}/{total} shards", file=sys.stderr)


def cmd_search(args) -> int:
    if args.exhaustive:
        try:
            report = max_depth_exhaustive(
                args.n, args.scope, use_symmetry=not args.no_symmetry,
                thread_hint=args.threads, allow_large=args.allow_large,
                progress=_progress if args.n >= 5 else None,
            )
        except SearchTooLargeError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.seed is None:
            raise UsageError("--sample requires --seed")
        report = max_depth_sampled(args.n, args.sample, args.seed, args.scope, thread_hint=args.threads)
    _emit_json(report.to_dict())
    return EXIT_OK


def _verify_sweep(name, fn, args) -> int:
    failures = 0
    for n in range(1, args.n_max + 1):
        if n <= 4:
            found = fn(n, "exhaustive")
            how = "exhaustive"
        else:
            found = fn(n, "sampled", args.sample, args.seed)
            how = f"sampled {args.sample} seed {args.seed}"
        status = "ok" if not found else f"FAIL ({len(found)} violations)"
        print(f"{name} n={n} [{how}]: {status}")
        failures += len(found)
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _verify_constructions(args) -> int:
    ok = True
    for board in catalog():
        try:
            verify_board(board)
            print(f"catalog {board.name}: ok (depth {board.expected_depth})")
        except ConstructionError as exc:
            print(f"catalog {board.name}: FAIL {exc}")
            ok = False
    for n in range(5, min(args.n_max, MAX_N) + 1):
        try:
            board = construct_max_depth(n)
            print(f"construct n={n}: ok (depth {board.expected_depth})")
        except ConstructionError as exc:
            print(f"construct n={n}: FAIL {exc}")
            ok = False
    return EXIT_OK if ok else EXIT_FAIL


def _verify_laws(args) -> int:
    ok = True
    for n in range(1, args.n_max + 1):
        dep = check_laws(n, "dependency", args.sample, args.seed)
        step = check_laws(n, "dolmatic_step", args.sample, args.seed)
        good = dep.isotone and step.dolmatic
        ok &= good
        print(f"laws n={n}: dependency isotone={dep.isotone} expansive={dep.expansive}; "
              f"dolmatic_step dolmatic={step.dolmatic}: {'ok' if good else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    if not 1 <= args.n_max <= MAX_N:
        raise UsageError(f"--n-max must be in [1, {MAX_N}]")
    if args.suite == "lemma1":
        return _verify_sweep("lemma1", lemma1_sweep, args)
    if args.suite == "bounds":
        return _verify_sweep("bounds", bound_sweep, args)
    if args.suite == "constructions":
        return _verify_constructions(args)
    return _verify_laws(args)


def _board_size(text: str) -> int:
    n = int(text)
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n must be in [1, {MAX_N}]")
    return n


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bingo-closure", description="Bingo closure on n x n boards")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", help="print the closure of a board")
    p.add_argument("--board", required=True, help="board file, or - for stdin")
    p.add_argument("--json", action="store_true", help="emit the full trace document")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("depth", help="print the depth of a board")
    p.add_argument("--board", required=True)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("trace", help="show the closure step by step")
    p.add_argument("--board", required=True)
    p.add_argument("--format", choices=("ascii", "json"), default="ascii")
    p.add_argument("--pretty", action="store_true", help="draw occupied cells as bullets")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("catalog", help="list or show the catalogued boards")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--show", metavar="NAME")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("construct", help="build a verified depth-2n spanning board")
    p.add_argument("--n", type=_board_size, required=True)
    p.add_argument("--ring-width", choices=("auto", "1", "2"), default="auto")
    p.add_argument("--json", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="maximum-depth search")
    p.add_argument("--n", type=_board_size, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sample", type=_positive, metavar="K")
    p.add_argument("--seed", type=int)
    p.add_argument("--allow-large", action="store_true", help="permit the n=5 exhaustive run")
    p.add_argument("--scope", choices=[s.value for s in Scope], default="all")
    p.add_argument("--threads", type=_positive)
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=("lemma1", "bounds", "constructions", "laws"), required=True)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--sample", type=_positive, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, BoardParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
