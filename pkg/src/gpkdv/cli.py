"""Command-line entry point: run experiments, write CSV tables + summaries.

Usage:
    gpkdv-lab <experiment> [--config FILE] [--out DIR] [--epsilon LIST]
              [--tau-max T] [--grid-n N] [--grid-length L] [--dt DT]
              [--seed S] [--threads K]

where <experiment> is one of: conservation, densities, scaling-identity,
bridge, kdv-compare, v-growth, consistency, wave-regime, all.
Command-line flags override config-file keys.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from gpkdv.experiments import (
    EXPERIMENTS,
    config_from_mapping,
    run_all,
    run_experiment,
)
from gpkdv.reporting import load_config_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpkdv-lab",
        description="Long-wave regime experiments for the 1D defocusing cubic flow",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS + ("all",):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=str, default=None, help="key = value config file")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--epsilon", type=str, default=None, help="comma-separated, decreasing")
        p.add_argument("--tau-max", type=float, default=None)
        p.add_argument("--grid-n", type=int, default=None)
        p.add_argument("--grid-length", type=float, default=None)
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--data", type=str, default=None, choices=["soliton", "left-moving"])
    return parser


def _collect_mapping(args) -> dict[str, str]:
    raw: dict[str, str] = {}
    if args.config:
        raw.update(load_config_file(args.config))
    for key, attr in (
        ("epsilon", "epsilon"),
        ("tau_max", "tau_max"),
        ("grid_n", "grid_n"),
        ("grid_length", "grid_length"),
        ("dt", "dt"),
        ("seed", "seed"),
        ("threads", "threads"),
        ("data", "data"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            raw[key] = str(value)
    return raw


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    raw = _collect_mapping(args)
    outdir = Path(args.out or raw.get("out", "results"))
    if args.experiment == "all":
        base = config_from_mapping("conservation", raw)
        reports = run_all(base)
    else:
        reports = [run_experiment(config_from_mapping(args.experiment, raw))]
    ok = True
    for report in reports:
        dest = report.write(outdir / report.experiment)
        status = "PASS" if report.passed else "FAIL"
        ok = ok and report.passed
        print(f"{report.experiment}: {status} ({report.wall_seconds:.1f}s) -> {dest}")
        for key, value in sorted(report.verdicts.items()):
            print(f"    {key}: {'PASS' if value else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
