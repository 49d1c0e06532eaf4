"""Command-line front end.

Exit code contract: 0 = battery ran and raised no severe flags,
2 = battery ran and raised severe flags, 1 = execution error.  Option
precedence: command-line flags beat the optional JSON config file, which
beats the COMETFORENSICS_SEED environment variable, which beats built-in
defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .dataset import CATEGORIES, CalibrationScale, parse_dataset
from .digits import LAST, POSITIONS
from .report import (
    STRUCTURED_FORMAT,
    TEXT_FORMAT,
    emit_plot_data,
    emit_report,
    has_severe_flags,
    run_battery,
)
from .simulate import (
    F_RATIO,
    SAMPLING_MODES,
    SimulationConfig,
    VARIANCE_TESTS,
    WITHOUT_REPLACEMENT,
)

SEED_ENV_VAR = "COMETFORENSICS_SEED"

_DEFAULTS = {
    "scale": "2.5,12.5,30,67.5,97.5",
    "population_size": 10_000,
    "cells_per_slide": None,  # None: derive from the dataset
    "replicates": 100,
    "seed": 0,
    "alpha": 0.05,
    "alpha_severe": 0.01,
    "digit_column": "A",
    "digit_position": LAST,
    "sampling": WITHOUT_REPLACEMENT,
    "variance_test": F_RATIO,
    "format": TEXT_FORMAT,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cometforensics",
        description="Detect statistical fingerprints of fabricated replicate count tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    analyze = sub.add_parser("analyze", help="run the full forensic battery over a CSV table")
    analyze.add_argument("data", help="CSV file with columns label,A,B,C,D,E")
    analyze.add_argument("--scale", help="five comma-separated calibration weights")
    analyze.add_argument("--population-size", type=int, dest="population_size")
    analyze.add_argument("--cells-per-slide", type=int, dest="cells_per_slide")
    analyze.add_argument("--replicates", type=int)
    analyze.add_argument("--seed", type=int)
    analyze.add_argument("--alpha", type=float)
    analyze.add_argument("--alpha-severe", type=float, dest="alpha_severe")
    analyze.add_argument("--digit-column", choices=CATEGORIES, dest="digit_column")
    analyze.add_argument("--digit-position", choices=POSITIONS, dest="digit_position")
    analyze.add_argument("--sampling", choices=SAMPLING_MODES)
    analyze.add_argument("--variance-test", choices=VARIANCE_TESTS, dest="variance_test")
    analyze.add_argument("--report", help="write the structured JSON report to this file")
    analyze.add_argument("--plots", help="write fig1.csv / fig2.csv plot data into this directory")
    analyze.add_argument("--format", choices=(TEXT_FORMAT, STRUCTURED_FORMAT))
    analyze.add_argument("--config", help="JSON file with default option values")
    return parser


def _resolve_options(args: argparse.Namespace) -> dict:
    options = dict(_DEFAULTS)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            options["seed"] = int(env_seed)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}")
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        options.update(loaded)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def _parse_scale(text: str) -> CalibrationScale:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 5:
        raise ValueError("scale needs exactly five comma-separated weights")
    return CalibrationScale(tuple(float(p) for p in parts))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        options = _resolve_options(args)
        scale = _parse_scale(options["scale"])
        with open(args.data, "r", encoding="utf-8") as fh:
            dataset = parse_dataset(fh.read(), scale)
        cells = options["cells_per_slide"]
        if cells is None:
            cells = dataset.slide_total
        cfg = SimulationConfig(
            n_points=len(dataset.points),
            cells_per_slide=cells,
            seed=options["seed"],
            replicates=options["replicates"],
            sampling=options["sampling"],
            population_size=options["population_size"],
        )
        report = run_battery(
            dataset,
            cfg,
            alpha=options["alpha"],
            alpha_severe=options["alpha_severe"],
            digit_column=options["digit_column"],
            digit_position=options["digit_position"],
            variance_test=options["variance_test"],
        )
        sys.stdout.buffer.write(emit_report(report, options["format"]))
        sys.stdout.buffer.flush()
        if args.report:
            with open(args.report, "wb") as fh:
                fh.write(emit_report(report, STRUCTURED_FORMAT))
        if args.plots:
            emit_plot_data(report, args.plots)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: [{type(exc).__name__}] {exc}", file=sys.stderr)
        return 1
    return 2 if has_severe_flags(report) else 0


if __name__ == "__main__":
    raise SystemExit(main())
