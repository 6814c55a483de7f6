"""Command line front end.

Exit codes: 0 success (simplify: solved), 1 usage/parse error, 2 search
exhausted, 3 an applied move changed the invariant (an implementation bug),
4 a resource cap was exceeded.  The state-sum crossing cap can be overridden
with the PLATKIT_ORACLE_CAP environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .braid import parse_word
from .errors import (
    BudgetError,
    OracleMismatchError,
    ParseError,
    PlatkitError,
    ReplayError,
    ResourceLimitError,
)
from .foliation import (
    random_tiling,
    reduce_to_standard,
    tiling_from_json,
    tiling_to_json,
    validation_errors,
)
from .invariants import invariant, invariants_equal
from .moves import MoveLog, MoveRecord, apply_record
from .plat import (
    PlatPresentation,
    is_composite_word,
    is_split_word,
    plat_from_json,
    plat_to_json,
)
from .render import RenderSpec, render_svg
from .simplify import SearchBudget, simplify_composite, simplify_split, verify_log

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EXHAUSTED = 2
EXIT_ORACLE_MISMATCH = 3
EXIT_RESOURCE = 4


def _read_source(value: str) -> str:
    """Interpret an argument as inline JSON, a file path, or '-' for stdin."""
    if value == "-":
        return sys.stdin.read()
    if value.lstrip().startswith(("{", "[")):
        return value
    return Path(value).read_text()


def _plat_from_args(args: argparse.Namespace) -> PlatPresentation:
    if getattr(args, "json", None):
        return plat_from_json(_read_source(args.json))
    if args.n is None:
        raise ParseError("provide either --json or --n (with --word)")
    word = parse_word(args.word or "", 2 * args.n)
    return PlatPresentation(args.n, word)


def _add_plat_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, help="bridge index")
    sub.add_argument("--word", default="", help="braid word, e.g. \"s1 s2'\"")
    sub.add_argument("--json", help="plat JSON (inline, file path, or - for stdin)")


def cmd_detect(args: argparse.Namespace) -> int:
    p = _plat_from_args(args)
    split = is_split_word(p)
    composite = is_composite_word(p)
    if split is None and composite is None:
        print("none")
    else:
        if split is not None:
            print(f"split at i={split}")
        if composite is not None:
            print(f"composite at i={composite}")
    return EXIT_OK


def cmd_apply(args: argparse.Namespace) -> int:
    if args.log:
        log = MoveLog.from_json(_read_source(args.log))
        if args.verify:
            result = verify_log(log)
            if not result:
                print(f"verification failed at step {result.failed_step}: "
                      f"{result.message}", file=sys.stderr)
                return EXIT_ORACLE_MISMATCH
        final = log.replay()
        print(plat_to_json(final))
        return EXIT_OK
    p = _plat_from_args(args)
    record = MoveRecord.from_json_dict(json.loads(_read_source(args.move)))
    result_plat = apply_record(p, record)
    if args.verify and not invariants_equal(invariant(p), invariant(result_plat)):
        print("move changed the link invariant", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    print(plat_to_json(result_plat))
    return EXIT_OK


def cmd_invariant(args: argparse.Namespace) -> int:
    p = _plat_from_args(args)
    print(str(invariant(p)))
    return EXIT_OK


def cmd_simplify(args: argparse.Namespace) -> int:
    p = _plat_from_args(args)
    budget = SearchBudget(
        beam_width=args.beam,
        max_depth=args.depth,
        max_word_length=args.max_word_length,
        time_cap=args.time,
    )
    if args.goal == "split":
        result = simplify_split(p, budget)
    else:
        result = simplify_composite(p, budget)
    print(json.dumps(result.to_json_dict(), sort_keys=True, separators=(",", ":")))
    return EXIT_OK if result.solved else EXIT_EXHAUSTED


def cmd_tiling(args: argparse.Namespace) -> int:
    if args.action == "random":
        g = random_tiling(args.kind, args.size, args.seed)
        print(tiling_to_json(g))
        return EXIT_OK
    g = tiling_from_json(_read_source(args.json))
    if args.action == "validate":
        errors = validation_errors(g)
        if errors:
            print("invalid: " + "; ".join(errors))
            return EXIT_ERROR
        print("valid")
        return EXIT_OK
    reduced, steps = reduce_to_standard(g)
    obj = {
        "final": json.loads(tiling_to_json(reduced)),
        "steps": [s.to_json_dict() for s in steps],
    }
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    p = _plat_from_args(args)
    svg = render_svg(p, RenderSpec())
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platkit", description="plat presentations: moves, invariants, tilings"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="report split/composite band indices")
    _add_plat_arguments(p_detect)
    p_detect.set_defaults(func=cmd_detect)

    p_apply = sub.add_parser("apply", help="apply a move record or replay a log")
    _add_plat_arguments(p_apply)
    p_apply.add_argument("--move", help="move record JSON (inline or file)")
    p_apply.add_argument("--log", help="move log JSON (inline or file)")
    p_apply.add_argument("--verify", action="store_true",
                         help="check the link invariant across the move(s)")
    p_apply.set_defaults(func=cmd_apply)

    p_inv = sub.add_parser("invariant", help="print the link invariant multiset")
    _add_plat_arguments(p_inv)
    p_inv.set_defaults(func=cmd_invariant)

    p_simp = sub.add_parser("simplify", help="search for a split/composite word")
    _add_plat_arguments(p_simp)
    p_simp.add_argument("--goal", choices=("split", "composite"), default="split")
    p_simp.add_argument("--beam", type=int, default=64)
    p_simp.add_argument("--depth", type=int, default=24)
    p_simp.add_argument("--max-word-length", type=int, default=64)
    p_simp.add_argument("--time", type=float, default=60.0)
    p_simp.add_argument("--seed", type=int, default=0)
    p_simp.set_defaults(func=cmd_simplify)

    p_til = sub.add_parser("tiling", help="validate, reduce, or generate tilings")
    p_til.add_argument("action", choices=("validate", "reduce", "random"))
    p_til.add_argument("--json", help="tile graph JSON (inline, file, or -)")
    p_til.add_argument("--kind", choices=("sphere", "twice_punctured"),
                       default="sphere")
    p_til.add_argument("--size", type=int, default=0)
    p_til.add_argument("--seed", type=int, default=0)
    p_til.set_defaults(func=cmd_tiling)

    p_render = sub.add_parser("render", help="render a plat diagram as SVG")
    _add_plat_arguments(p_render)
    p_render.add_argument("--out", help="output file (stdout if omitted)")
    p_render.set_defaults(func=cmd_render)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ResourceLimitError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    except (BudgetError, ReplayError, PlatkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
