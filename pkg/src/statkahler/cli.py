"""Command-line entry point: ``statkahler verify|orbits|induce|report``.

Exit status is 0 when every report row passes, 1 when any row fails and 2 on
configuration or suite errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .config import SUITES, RunConfig, apply_tolerance_overrides, load_config
from .errors import StatKahlerError
from .suites import Row, induced_operators, run

FIELDS = ("check", "inputs_hash", "residual", "tolerance", "passed", "claim")


def render(rows: list[Row], fmt: str) -> str:
    if fmt == "json":
        body = {
            "rows": [asdict(r) for r in rows],
            "summary": {"total": len(rows), "failed": sum(not r.passed for r in rows)},
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in rows:
        writer.writerow([r.check, r.inputs_hash, repr(r.residual), repr(r.tolerance),
                         "true" if r.passed else "false", r.claim])
    return buf.getvalue()


def write_operators(pairs, path: Path):
    """Nonzero entries as ``element,row,col,re,im``; element coordinates go to a header comment."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        for idx, (g, _) in enumerate(pairs):
            fh.write(f"# element {idx}: " + " ".join(repr(float(x)) for x in g) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["element", "row", "col", "re", "im"])
        for idx, (_, op) in enumerate(pairs):
            for i, j in zip(*np.nonzero(op)):
                writer.writerow([idx, int(i), int(j), repr(float(op[i, j].real)), repr(float(op[i, j].imag))])


def _suite_name(text: str) -> str:
    # validated here: argparse on 3.10 rejects an empty nargs="*" list when choices is set
    if text not in SUITES:
        raise argparse.ArgumentTypeError(f"unknown suite {text!r} (choose from {', '.join(SUITES)})")
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration (relative paths also searched "
                                         "in $STATKAHLER_CONFIG_DIR)")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override one tolerance; repeatable")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="report format")

    parser = argparse.ArgumentParser(prog="statkahler", description="Verification suites for the "
                                     "Kaehler geometry of exponential families and the orbit method.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run the named suites")
    verify.add_argument("suites", nargs="*", type=_suite_name, metavar="suite",
                        help=f"one or more of: {', '.join(SUITES)} (default: the config's checks)")
    sub.add_parser("orbits", parents=[common], help="coadjoint orbit and polarization checks")
    induce = sub.add_parser("induce", parents=[common], help="induced representation checks")
    induce.add_argument("--operators", help="also export sampled operators as CSV")
    sub.add_parser("report", parents=[common], help="run every suite listed in the config")
    return parser


def execute(args: argparse.Namespace) -> tuple[list[Row], RunConfig]:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    apply_tolerance_overrides(cfg, args.tol)
    if args.format:
        cfg.output_format = args.format
    if args.out:
        cfg.output_path = args.out
    if args.command == "verify":
        suites = args.suites or cfg.checks
    elif args.command in ("orbits", "induce"):
        suites = [args.command]
    else:
        suites = cfg.checks
    rows = run(cfg, suites)
    if args.command == "induce" and args.operators:
        rng = np.random.default_rng([cfg.seed, len(SUITES)])
        write_operators(induced_operators(cfg, rng), Path(args.operators))
    return rows, cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows, cfg = execute(args)
    except StatKahlerError as exc:
        print(f"statkahler: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = render(rows, cfg.output_format)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.check} residual={r.residual!r} tolerance={r.tolerance!r} [{r.claim}]", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
