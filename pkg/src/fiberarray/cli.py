"""Command line entry point: simulate, sweep, steady, validate, preset."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dynamics import DEFAULT_T_GUARD, IntegrationError, SteadyStateNotReached
from .scenario import (
    PRESETS,
    ConfigError,
    parse_config,
    parse_sweep,
    preset,
    run_scenario,
    run_steady,
    run_sweep,
    validate,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

log = logging.getLogger("fiberarray")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None


def _default_output(config_path: str, suffix: str = "") -> str:
    p = Path(config_path)
    return str(p.with_name(p.stem + suffix + ".csv"))


def cmd_simulate(args) -> int:
    spec = parse_config(_read(args.config))
    out = args.output or spec.output_path or _default_output(args.config)
    res = run_scenario(spec, out)
    print(f"wrote {res.csv_path} ({len(res.records)} rows), final ||L[rho]||_F = {res.final_residual:.3e}")
    return EXIT_OK


def cmd_steady(args) -> int:
    spec = parse_config(_read(args.config))
    out = args.output or spec.output_path or _default_output(args.config, "_steady")
    res = run_steady(spec, args.t_guard, out)
    print(f"steady state reached at t = {res.records[0].t:g}, ||L[rho]||_F = {res.final_residual:.3e}; wrote {res.csv_path}")
    return EXIT_OK


def _report_sweep(res) -> int:
    print(f"wrote {res.index_path} ({len(res.entries)} points, {res.failed} failed)")
    for e in res.entries:
        if e["status"] != "ok":
            print(f"  failed {e['params']}: {e['error']}", file=sys.stderr)
    return EXIT_NUMERICAL if res.failed else EXIT_OK


def cmd_sweep(args) -> int:
    sweep = parse_sweep(_read(args.config))
    if args.output_dir:
        sweep.output_dir = args.output_dir
    if args.workers:
        sweep.workers = args.workers
    return _report_sweep(run_sweep(sweep))


def cmd_validate(args) -> int:
    report = validate(tighten=args.tighten, verbose=args.verbose)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_preset(args) -> int:
    params = {}
    if args.name == "fig4":
        params = {"n": args.n, "initial": args.initial}
    elif args.n is not None or args.initial is not None:
        raise ConfigError("--n and --initial only apply to fig4")
    sweep = preset(args.name, **params)
    if args.output_dir:
        sweep.output_dir = args.output_dir
    if args.emit_config:
        cfg = {"base": sweep.base, "axes": [list(a) for a in sweep.axes], "output_dir": sweep.output_dir}
        print(json.dumps(cfg, indent=2))
        return EXIT_OK
    if args.workers:
        sweep.workers = args.workers
    return _report_sweep(run_sweep(sweep))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fiberarray", description=__doc__)
    ap.add_argument("-v", "--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario and write CSV + JSON sidecar")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="CSV path (default: output_path from config, else <config>.csv)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("steady", help="integrate to the steady state and record its correlations")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("--t-guard", type=float, default=DEFAULT_T_GUARD)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sweep", help="run a parameter grid into a directory")
    p.add_argument("config")
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="cross-check fast paths against the oracles")
    p.add_argument("--verbose", action="store_true", help="show margins for every check")
    p.add_argument("--tighten", type=float, default=1.0, help="divide every tolerance by this factor")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("preset", help="run (or print) one of the preset sweeps")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--emit-config", action="store_true", help="print the sweep JSON instead of running it")
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int)
    p.add_argument("--n", type=float, help="fiber occupation n1 = n2 = n (fig4 only)")
    p.add_argument("--initial", help="initial basis label (fig4 only)")
    p.set_defaults(func=cmd_preset)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, SteadyStateNotReached) as e:
        print(f"numerical abort: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
