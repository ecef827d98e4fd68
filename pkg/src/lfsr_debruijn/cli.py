"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (not de Bruijn, not joinable,
structure check failed), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .construction import PolicyError, dump_json, format_paths, run_algorithm1
from .diagram import InvariantError, analysis_report, build_diagram, export_dot, format_report
from .fsr import StageRangeError, check_stages, to_bitstring
from .joining import (
    DeBruijnSequence,
    NotJoinableError,
    assemble_de_bruijn,
    find_conjugate_pairs,
    first_repeated_window,
    pairs_json,
    verify_de_bruijn,
)

OUT_DIR_ENV = "LFSR_DEBRUIJN_OUT_DIR"

FORMATS = {
    "analyze": ("text", "json"),
    "construct": ("text", "json"),
    "pairs": ("text", "json"),
    "debruijn": ("bits", "text", "json"),
    "verify": ("text", "json"),
    "export": ("dot",),
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, help="number of register stages (>= 3)")
    common.add_argument("--policy", default="lex",
                        help="leaf policy: lex, table1-script, random:SEED (default lex)")
    common.add_argument("--format", dest="fmt", help="output format")
    common.add_argument("--out", help=f"output file (relative paths resolve against ${OUT_DIR_ENV})")
    common.add_argument("--workers", type=int, default=1, help="threads for building the diagram")
    common.add_argument("--force", action="store_true",
                        help="lift size caps (n up to 32, DOT export beyond n=10)")

    parser = argparse.ArgumentParser(
        prog="lfsr-debruijn",
        description="State diagrams of the singular LFSR x_{n-1}+x_n and de Bruijn cycles from them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="components, cycles, trees, adjacency")
    sub.add_parser("construct", parents=[common], help="run the path extraction")
    sub.add_parser("pairs", parents=[common], help="conjugate pairs between constructed cycles")
    sub.add_parser("debruijn", parents=[common], help="emit a verified de Bruijn sequence")
    v = sub.add_parser("verify", parents=[common], help="check a bitstring is de Bruijn of order n")
    v.add_argument("sequence", help="bitstring, or - to read stdin")
    sub.add_parser("export", parents=[common], help="Graphviz DOT of the state diagram")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _stages(args) -> int:
    if args.n is None:
        raise UsageError("-n is required")
    try:
        return check_stages(args.n, force=args.force)
    except StageRangeError as exc:
        raise UsageError(str(exc)) from None


def cmd_analyze(args) -> int:
    d = build_diagram(_stages(args), workers=args.workers, force=args.force)
    report = analysis_report(d)
    if args.fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        _emit(format_report(report), args.out)
    return 0 if report["ok"] else 1


def _construct(args):
    d = build_diagram(_stages(args), workers=args.workers, force=args.force)
    try:
        return d, run_algorithm1(d, args.policy)
    except PolicyError as exc:
        raise UsageError(str(exc)) from None


def cmd_construct(args) -> int:
    _, r = _construct(args)
    _emit(dump_json(r) if args.fmt == "json" else format_paths(r), args.out)
    return 0


def cmd_pairs(args) -> int:
    _, r = _construct(args)
    pairs = find_conjugate_pairs(r)
    if args.fmt == "json":
        _emit(pairs_json(pairs, r.n), args.out)
    else:
        lines = [f"{len(pairs)} conjugate pairs across {r.num_cycles} cycles"]
        lines += [
            f"{to_bitstring(p.z, r.n)} C{p.cycle_of_z}  {to_bitstring(p.z_hat, r.n)} C{p.cycle_of_z_hat}"
            for p in pairs
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_debruijn(args) -> int:
    _, r = _construct(args)
    try:
        seq = assemble_de_bruijn(r)
    except NotJoinableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ok = verify_de_bruijn(seq)
    if args.fmt == "json":
        body = {
            "schema": 1,
            "n": r.n,
            "policy": str(r.policy),
            "cycles": r.num_cycles,
            "joins": [p.to_json(r.n) for p in seq.joins],
            "verified": ok,
            "sequence": str(seq),
        }
        _emit(json.dumps(body, indent=2) + "\n", args.out)
    elif args.fmt == "text":
        lines = [str(seq)] + [f"{i:>{len(str(len(seq)))}} {w}" for i, w in enumerate(seq.windows())]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(str(seq) + "\n", args.out)
    if not ok:
        print("error: internal verifier rejected the sequence", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.sequence == "-" else args.sequence
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise UsageError("sequence must contain only 0 and 1")
    size = len(text)
    if size & (size - 1):
        raise UsageError(f"length {size} is not a power of two")
    n = size.bit_length() - 1
    if args.n is not None:
        if args.n < 1:
            raise UsageError("-n must be positive")
        if size != 1 << args.n:
            raise UsageError(f"length {size} does not equal 2**{args.n}")
        n = args.n
    seq = DeBruijnSequence.from_string(text, n)
    ok = verify_de_bruijn(seq)
    repeat = None if ok else first_repeated_window(seq)
    if args.fmt == "json":
        body = {"schema": 1, "n": n, "de_bruijn": ok}
        if repeat:
            body["repeated_window"] = {"position": repeat[0], "word": repeat[1]}
        _emit(json.dumps(body, indent=2) + "\n", args.out)
    elif ok:
        _emit(f"de Bruijn sequence of order {n}\n", args.out)
    else:
        _emit(f"not de Bruijn: window {repeat[1]} repeats at position {repeat[0]}\n", args.out)
    return 0 if ok else 1


def cmd_export(args) -> int:
    d = build_diagram(_stages(args), workers=args.workers, force=args.force)
    try:
        text = export_dot(d, force=args.force)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(text, args.out)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "pairs": cmd_pairs,
    "debruijn": cmd_debruijn,
    "verify": cmd_verify,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    allowed = FORMATS[args.command]
    if args.fmt is None:
        args.fmt = allowed[0]
    try:
        if args.fmt not in allowed:
            raise UsageError(f"--format for {args.command} must be one of {', '.join(allowed)}")
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
