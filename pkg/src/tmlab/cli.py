"""Command line interface for the simulation lab."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import lab, verify
from .encoding import decode_m_configuration, encode_initial_configuration
from .machine import Configuration, format_window, run
from .rna import rna_decode, rna_encode
from .tables import BUNDLED_IDS, bundled_machine, parse_table, table_stats


def load_machine(ident: str):
    """A bundled machine id, or a path to a machine file."""
    if ident in BUNDLED_IDS:
        return bundled_machine(ident)
    path = Path(ident)
    if path.exists():
        return parse_table(path.read_text(encoding="utf-8"))
    raise SystemExit(
        f"unknown machine {ident!r}: not a bundled id {BUNDLED_IDS} and not a file"
    )


def text_or_file(arg: str) -> str:
    """Literal text, or @path to read it from a file (whitespace stripped)."""
    if arg.startswith("@"):
        raw = Path(arg[1:]).read_text(encoding="utf-8")
        return "".join(raw.split())
    return arg


def cmd_run(args) -> int:
    table = load_machine(args.machine)
    initial = Configuration.from_glyphs(
        table, args.input, head=args.head, state=args.state
    )
    fence = initial.head if args.fence_left else None
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as sink:
            lines, result = lab._export_trace_run(
                table, initial, args.max_steps, sink, args.trace_every, fence
            )
        print(f"trace: {lines} records -> {args.trace}")
    else:
        result = run(table, initial, args.max_steps, fence_left=fence)
    print(f"steps:  {result.steps}")
    print(f"halt:   {result.reason.value}")
    print(f"state:  {result.final.state}")
    print(f"head:   {result.final.head}")
    print(f"window: {format_window(table, result.final)}")
    return 0


def cmd_encode(args) -> int:
    table = load_machine(args.machine)
    config = Configuration.from_glyphs(table, args.input, head=args.head, state=1)
    encoded = encode_initial_configuration(table, config)
    print(encoded.full)
    return 0


def cmd_decode_config(args) -> int:
    decoded = decode_m_configuration(text_or_file(args.text))
    print("tape ranks:", " ".join(str(r) for r in decoded.tape_ranks))
    print("scanned:   ", decoded.scanned)
    print("state:     ", decoded.state)
    print("clean:     ", "true" if decoded.clean else f"false ({decoded.problem})")
    return 0


def cmd_rna(args) -> int:
    text = text_or_file(args.text)
    print(rna_encode(text) if args.direction == "encode" else rna_decode(text))
    return 0


def cmd_stats(args) -> int:
    stats = table_stats(load_machine(args.machine))
    print(stats.as_record() if args.format == "records" else stats.aligned())
    return 0


def cmd_experiment(args) -> int:
    report = lab.run_experiment(args.id, budget=args.budget)
    print(report.summary())
    return 0 if report.regions_match else 1


def cmd_verify(args) -> int:
    return 0 if verify.verify_all(only=args.only) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmlab", description="Deterministic Turing-machine simulation lab"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a machine on a glyph tape")
    p.add_argument("machine", help=f"bundled id {BUNDLED_IDS} or a file path")
    p.add_argument("--input", default="", help="initial tape glyphs from cell 0")
    p.add_argument("--head", type=int, default=0)
    p.add_argument("--state", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=10**7)
    p.add_argument("--fence-left", action="store_true",
                   help="stop if the head would move left of its start cell")
    p.add_argument("--trace", metavar="PATH", help="write a trace file")
    p.add_argument("--trace-every", type=int, default=1, metavar="N",
                   help="sample every N steps (endpoints always included)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("encode", help="compile machine + tape into simulator tape text")
    p.add_argument("machine")
    p.add_argument("--input", default="", help="machine tape glyphs from cell 0")
    p.add_argument("--head", type=int, default=0)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode-config", help="read a machine configuration out of simulator tape text")
    p.add_argument("text", help="tape text, or @file")
    p.set_defaults(func=cmd_decode_config)

    p = sub.add_parser("rna", help="nucleotide-pair codec")
    p.add_argument("direction", choices=("encode", "decode"))
    p.add_argument("text", help="text, or @file")
    p.set_defaults(func=cmd_rna)

    p = sub.add_parser("stats", help="instruction census of a machine table")
    p.add_argument("machine")
    p.add_argument("--format", choices=("aligned", "records"), default="aligned")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("experiment",
                       help="run a reference experiment (exit 0 iff the verbatim regions match)")
    p.add_argument("id", choices=("E1", "E2", "E3"))
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--only", metavar="ID", help="a single criterion, e.g. A4")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"tmlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
