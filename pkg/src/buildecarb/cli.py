"""Command line front end.

Exit codes: 0 success, 1 validation or domain findings, 2 I/O or usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .dsd import DEFAULT_DELTA, parse_stages
from .errors import DecarbError, UnwritablePath
from .ingest import assemble_panel, parse_enduse_csv, parse_macro_csv
from .report import (
    RANK_METRICS,
    RunConfig,
    cmd_export,
    contribution_table,
    decode,
    metrics_table,
    ranking_table,
    run_assess,
    run_decompose,
    write_output,
)

log = logging.getLogger("buildecarb")

EXIT_OK, EXIT_FINDINGS, EXIT_IO = 0, 1, 2


def _load(macro_path, enduse_path):
    macro = parse_macro_csv(macro_path)
    enduse = parse_enduse_csv(enduse_path)
    panel, issues = assemble_panel(macro.records, enduse.records)
    return panel, macro.diagnostics + enduse.diagnostics + issues


def cmd_validate(args) -> int:
    try:
        _, diagnostics = _load(args.macro, args.enduse)
    except DecarbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    for d in diagnostics:
        print(d)
    print(f"{len(diagnostics)} finding(s)")
    if args.json:
        write_output(json.dumps([d.to_dict() for d in diagnostics], indent=1) + "\n", args.json)
    return EXIT_OK if not diagnostics else EXIT_FINDINGS


def _config(args) -> RunConfig:
    return RunConfig(
        sector=args.sector,
        regions=args.region,
        year_from=args.year_from,
        year_to=args.year_to,
        mode=args.mode,
        stages=parse_stages(args.stages) if args.stages else [],
        delta=args.delta,
        fmt=args.format,
        out=args.out,
    )


def _panel(args):
    panel, diagnostics = _load(args.macro, args.enduse)
    for d in diagnostics:
        log.warning("%s", d)
    return panel


def cmd_decompose(args) -> int:
    cfg = _config(args)
    runs = run_decompose(_panel(args), cfg)
    cmd_export(contribution_table(runs), cfg.fmt, cfg.out)
    return EXIT_OK


def cmd_assess(args) -> int:
    cfg = _config(args)
    runs = run_assess(_panel(args), cfg)
    cmd_export(metrics_table(runs), cfg.fmt, cfg.out)
    return EXIT_OK


def cmd_rank(args) -> int:
    cfg = _config(args)
    runs = run_assess(_panel(args), cfg)
    metrics = RANK_METRICS if args.metric == "all" else (args.metric,)
    cmd_export(ranking_table(runs, metrics, args.top), cfg.fmt, cfg.out)
    return EXIT_OK


def cmd_reexport(args) -> int:
    table = decode(Path(args.input).read_text(encoding="utf-8"))
    cmd_export(table, args.format, args.out)
    return EXIT_OK


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--macro", required=True, help="socio-economic CSV")
    p.add_argument("--enduse", required=True, help="end-use energy/emissions CSV")
    p.add_argument("--sector", choices=["residential", "commercial"], default="residential")
    p.add_argument("--region", action="append", help="restrict to region (repeatable)")
    p.add_argument("--from", dest="year_from", type=int)
    p.add_argument("--to", dest="year_to", type=int)
    p.add_argument("--mode", choices=["annual", "stage"], default="annual")
    p.add_argument("--stages", help='e.g. "2001-2005,2006-2010"')
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="zero substitution value")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="buildecarb",
        description="Decompose and assess operational carbon intensity of buildings.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the two input tables")
    p.add_argument("macro")
    p.add_argument("enduse")
    p.add_argument("--json", help="also write findings as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="factor contributions per window")
    _run_options(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("assess", help="decarbonization metrics per window")
    _run_options(p)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("rank", help="top regions by average annual decarbonization")
    _run_options(p)
    p.add_argument("--metric", choices=list(RANK_METRICS) + ["all"], default="total")
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("export", help="re-encode a result table as csv or json")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reexport)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command != "validate":
            for name in ("macro", "enduse", "input"):
                path = getattr(args, name, None)
                if path is not None and not Path(path).is_file():
                    raise FileNotFoundError(path)
        return args.func(args)
    except UnwritablePath as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DecarbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
