"""Command-line entry point.

Verbs: delay-scan, energy-scan, g2-scan, validate.  Common flags:
--config <path>, --out <dir>, --seed <u64>, --threads <n>.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
4 insufficient statistics.
"""

from __future__ import annotations

import argparse
import sys

from .config import build_scenario, load_config
from .errors import ConfigError, CurveShapeError, InsufficientStatisticsError, QuadratureError
from .scans import run_delay_scan, run_energy_scan, run_g2_scan

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_STATISTICS = 4


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", required=True, help="scenario TOML file")
    parser.add_argument("--out", default=None, help="output directory (overrides [output])")
    parser.add_argument("--seed", type=int, default=None, help="override the scan seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrshutter",
        description="Fiber Kerr-shutter simulator: delay/energy scans and photon statistics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("delay-scan", "switching efficiency vs pump delay"),
        ("energy-scan", "switching efficiency and noise vs pump energy"),
        ("g2-scan", "Monte Carlo heralded g2 vs pump energy"),
        ("validate", "check a scenario config and exit"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    return parser


def _scenario_for(args, expected_type):
    raw = load_config(args.config)
    if args.seed is not None:
        raw.setdefault("scan", {})["seed"] = args.seed
    scenario = build_scenario(raw)
    if expected_type is not None and scenario.scan.type != expected_type:
        raise ConfigError(
            f"[scan] type is {scenario.scan.type!r} but the command expects {expected_type!r}"
        )
    return scenario


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            scenario = _scenario_for(args, None)
            print(
                f"config ok: {scenario.scan.type} scan, "
                f"{scenario.scan.grid.size} grid points, "
                f"calibration {scenario.shutter.calibration:.6g}, "
                f"mean pairs {scenario.source.mean_pairs:.6g}"
            )
            return EXIT_OK

        if args.command == "delay-scan":
            scenario = _scenario_for(args, "delay")
            result = run_delay_scan(scenario, out_dir=args.out, threads=args.threads)
            width = result["diagnostics"]["fwhm_ps"]
            width_text = f"{width:.4g} ps" if width is not None else "undefined"
            print(f"wrote {result['csv']} (FWHM {width_text})")
            return EXIT_OK

        if args.command == "energy-scan":
            scenario = _scenario_for(args, "energy")
            result = run_energy_scan(scenario, out_dir=args.out, threads=args.threads)
            kappa = result["diagnostics"]["kappa_rad_per_nj"]
            print(f"wrote {result['csv']} (kappa {kappa:.6g} rad/nJ)")
            return EXIT_OK

        scenario = _scenario_for(args, "g2")
        result = run_g2_scan(scenario, out_dir=args.out, threads=args.threads)
        flagged = result["diagnostics"]["flagged_points"]
        print(f"wrote {result['csv']} ({flagged} flagged point(s))")
        return EXIT_OK

    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, CurveShapeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InsufficientStatisticsError as exc:
        print(f"insufficient statistics: {exc}", file=sys.stderr)
        return EXIT_STATISTICS


if __name__ == "__main__":
    sys.exit(main())
