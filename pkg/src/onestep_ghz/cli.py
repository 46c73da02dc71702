"""Command-line driver.

    onestep-ghz run    --parties 3 --trials 10000 --seed 7 --out run.json
    onestep-ghz sweep  --parties 6 --protocol both --format csv --out sweep.csv
    onestep-ghz verify --parties 4
    onestep-ghz schema

Exit status is 0 when every trial succeeds, 1 if any trial fails, 2 on a
configuration error or an oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ConfigError, OracleMismatchError
from .harness import (
    CONFIG_SCHEMA,
    EXHAUSTIVE,
    MONTECARLO,
    ORACLE,
    REPORT_SCHEMA,
    emit_report,
    load_config,
    run_experiment,
)

logger = logging.getLogger("onestep_ghz")

MODE_OF = {"run": MONTECARLO, "sweep": EXHAUSTIVE, "verify": ORACLE}
FORMAT_ALIASES = {"json": "json", "json-like": "json", "csv": "csv", "csv-like": "csv"}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or JSON experiment config")
    p.add_argument("--parties", type=int, help="number of photons / parties N")
    p.add_argument("--protocol", choices=["spatial", "frequency", "both"])
    p.add_argument("--trials", type=int, help="Monte Carlo trials (ignored by sweep/verify)")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--out", help="report path; stdout if omitted")
    p.add_argument("--format", choices=sorted(FORMAT_ALIASES), help="report format")
    p.add_argument("--workers", type=int, help="worker processes for Monte Carlo")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onestep-ghz",
        description="Simulate one-step GHZ polarization error correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="Monte Carlo campaign over sampled noise"))
    _add_common(sub.add_parser("sweep", help="every GHZ input x every detection branch"))
    _add_common(sub.add_parser("verify", help="sweep plus dense state-vector cross-check (N <= 4)"))
    schema = sub.add_parser("schema", help="print the config and report JSON schemas")
    schema.add_argument("which", nargs="?", choices=["config", "report", "all"], default="all")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )

    if args.command == "schema":
        doc = {"config": CONFIG_SCHEMA, "report": REPORT_SCHEMA}
        if args.which != "all":
            doc = doc[args.which]
        print(json.dumps(doc, indent=2))
        return 0

    try:
        cfg = load_config(
            args.config,
            n_parties=args.parties,
            protocol=args.protocol,
            trials=args.trials,
            seed=args.seed,
            out=args.out,
            format=FORMAT_ALIASES.get(args.format) if args.format else None,
            workers=args.workers,
            mode=MODE_OF[args.command],
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    logger.info("running %s with N=%d, protocol=%s", cfg.mode, cfg.n_parties, cfg.protocol)
    try:
        report = run_experiment(cfg)
    except OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 2

    if cfg.out:
        emit_report(report, cfg.out, cfg.format)
        logger.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(report.to_json() if cfg.format == "json" else report.to_csv())

    agg = report.aggregates
    if agg is None:
        print("no trials", file=sys.stderr)
        return 0
    print(
        f"{agg['n_records']} runs, success rate {agg['success_rate']:.6f}, "
        f"min fidelity {agg['min_fidelity']:.12f}",
        file=sys.stderr,
    )
    return 0 if report.all_success else 1


if __name__ == "__main__":
    sys.exit(main())
