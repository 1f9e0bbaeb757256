"""Command-line entry point.

Subcommands: simulate, ensemble, cool, perturb, check.  Exit codes:
0 success, 1 validation error, 2 numerical failure, 3 failed check.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import parse_config
from .diagnostics import run_checks
from .errors import NumericsError, ValidationError
from .output import write_series
from .protocols import run_cooling, run_ensemble
from .dynamics import integrate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_CHECK_FAILED = 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qchybrid",
        description="Hybrid dynamics of two q-bits coupled to a classical oscillator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, help_text in [
        ("simulate", "integrate a single trajectory and write its time series"),
        ("ensemble", "Monte-Carlo average over Gaussian classical initial conditions"),
        ("cool", "run the Gaussian-pulse energy-transfer experiment"),
        ("perturb", "integrate a trajectory with a q-bit perturbation"),
        ("check", "run the invariant diagnostics on a configured system"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="config file (key = value lines)")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                       dest="overrides", help="override a config key (repeatable)")
        p.add_argument("--out", metavar="PATH", help="output CSV path (overrides output.path)")
        p.add_argument("--seed", type=int, metavar="N", help="override the seed key")
        p.add_argument("--threads", type=int, metavar="N",
                       help="worker threads for ensembles (0 = auto)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.threads is not None:
        overrides.append(f"threads={args.threads}")
    if args.out is not None:
        overrides.append(f"output.path={args.out}")

    try:
        cfg = parse_config(args.config, overrides, experiment=args.experiment)
        for w in cfg.warnings:
            print(f"warning: {w}", file=sys.stderr)
        for key in sorted(cfg.resolved):
            print(f"resolved: {key} = {cfg.resolved[key]}", file=sys.stderr)
        return _dispatch(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _dispatch(cfg) -> int:
    if cfg.experiment == "check":
        report = run_checks(cfg)
        for line in report.lines():
            print(line)
        return EXIT_OK if report.ok else EXIT_CHECK_FAILED

    if cfg.output_path is None:
        raise ValidationError("no output path: set output.path or pass --out")

    meta = {"resolved_config": cfg.resolved}
    if cfg.experiment in ("simulate", "perturb"):
        result = integrate(cfg.initial_state(), cfg.params, cfg.schedule, cfg.pert,
                           t_max=cfg.t_max, dt=cfg.dt, stride=cfg.stride)
        n = len(result)
    elif cfg.experiment == "cool":
        cooling = run_cooling(cfg.initial_state(), cfg.params, cfg.schedule,
                              t_max=cfg.t_max, dt=cfg.dt, stride=cfg.stride,
                              pert=cfg.pert)
        meta["pulse_window"] = list(cooling.window)
        meta["delta_e_qm"] = cooling.delta_e_qm
        result = cooling
        n = len(cooling.trajectory)
    elif cfg.experiment == "ensemble":
        result = run_ensemble(cfg.ensemble_spec(), threads=cfg.threads or None)
        n = len(result.t)
    else:  # pragma: no cover - parser restricts the choices
        raise ValidationError(f"unhandled experiment {cfg.experiment!r}")

    path = write_series(result, cfg.output_path, metadata=meta)
    print(f"wrote {n} samples to {path}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
