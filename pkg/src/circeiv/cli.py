"""Command-line front end.

Subcommands: ``simulate``, ``calibrate``, ``estimate`` and ``reliability``.
Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import (
    ConfigurationError,
    IllPosedWeightError,
    ReplicationFailureError,
    UndefinedDirectionError,
)
from .experiments import (
    baseline_curves,
    calibrate_c0,
    cc_model,
    estimate_curve,
    lc_model,
    read_curve_csv,
    reliability_ratio,
    run_monte_carlo,
)
from .noise import parse_noise
from .selection import EstimatorConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _parse_ss(text):
    if text is None:
        return None
    vals = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"--ss expects key=value pairs, got {part!r}")
        try:
            vals[key.strip().lower()] = float(val)
        except ValueError:
            raise UsageError(f"--ss value for {key!r} is not a number") from None
    for a, b in (("gamma", "rho"), ("b", "a")):
        if a in vals and b in vals:
            return vals[a], vals[b]
    raise UsageError("--ss needs gamma=..,rho=.. (linear) or b=..,a=.. (circular)")


def _parse_floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _parse_x_grid(text, data):
    if text is None:
        lo, hi = float(np.min(data.z)), float(np.max(data.z))
        return np.linspace(lo, hi, 50)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--x-grid expects start:stop:num or a comma list")
        try:
            return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise UsageError(f"bad --x-grid {text!r}") from None
    return np.array(_parse_floats(text))


def _model(args):
    if args.model == "lc":
        if args.sigma_eps is None:
            raise UsageError("--model lc needs --sigma-eps")
        return lc_model(args.sigma_eps)
    if args.lambda_eps is None:
        raise UsageError("--model cc needs --lambda-eps")
    return cc_model(args.lambda_eps)


def _estimator_config(args, need_c0=True):
    ss = _parse_ss(getattr(args, "ss", None))
    if ss is not None:
        return EstimatorConfig(mode="ss", ss_params=ss)
    if need_c0 and args.c0 is None:
        raise UsageError("--c0 is required unless --ss is given")
    c0 = None if args.c0 is None else (args.c0 if args.c0_2 is None else (args.c0, args.c0_2))
    try:
        return EstimatorConfig(c0=c0, grid=getattr(args, "grid_kind", "admissible"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _resolved(args):
    skip = {"func", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _csv_header(args):
    return (f"# circeiv {__version__}\n"
            f"# config: {json.dumps(_resolved(args), sort_keys=True)}\n")


def _emit(args, payload: dict, csv_text: str):
    payload = dict(payload)
    payload["resolved_config"] = _resolved(args)
    payload["version"] = __version__
    js = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(js if args.format != "csv" else _csv_header(args) + csv_text)
        return
    out = Path(args.out)
    if args.format in ("json", "both"):
        out.with_suffix(".json").write_text(js)
    if args.format in ("csv", "both"):
        out.with_suffix(".csv").write_text(_csv_header(args) + csv_text)


def cmd_simulate(args):
    model = _model(args)
    cfg = _estimator_config(args)
    report = run_monte_carlo(model, args.n, args.x, args.reps, cfg, seed=args.seed, threads=args.threads)
    _emit(args, json.loads(report.to_json()), report.to_csv())
    return EXIT_OK


def cmd_calibrate(args):
    model = _model(args)
    grid = None if args.grid is None else _parse_floats(args.grid)
    if grid is not None and not grid:
        raise UsageError("--grid is empty")
    base = EstimatorConfig(grid=args.grid_kind)
    curve = calibrate_c0(model, args.n, args.x, grid, args.reps, args.seed, args.threads, base_config=base)
    _emit(args, json.loads(curve.to_json()), curve.to_csv())
    return EXIT_OK


def cmd_estimate(args):
    try:
        noise = parse_noise(args.noise, "linear")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = _estimator_config(args, need_c0=not noise.smoothness.is_ss)
    try:
        data = read_curve_csv(args.data)
    except OSError as exc:
        raise DataError(f"{args.data}: {exc.strerror}") from None
    except ValueError as exc:
        raise DataError(f"{args.data}: {exc}") from None
    xs = _parse_x_grid(args.x_grid, data)
    records = estimate_curve(data, noise, xs, cfg)
    cols = ["x", "m_hat", "selected_1", "selected_2"]
    if args.baselines:
        base = baseline_curves(xs)
        for rec, fl, sp, tr in zip(records, base["FL"], base["SPML"], base["trig"]):
            rec.update(FL=float(fl), SPML=float(sp), trig=float(tr))
        cols += ["FL", "SPML", "trig"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rec in records:
        w.writerow(["" if math.isnan(rec[c]) else repr(rec[c]) for c in cols])
    payload = {"records": [{k: (None if math.isnan(v) else v) for k, v in r.items()} for r in records],
               "n": data.n}
    _emit(args, payload, buf.getvalue())
    return EXIT_OK


def cmd_reliability(args):
    value = reliability_ratio(_model(args))
    if args.decimals is not None and args.decimals < 0:
        raise UsageError("--decimals must be non-negative")
    if args.out is None and args.format == "json":
        d = 6 if args.decimals is None else args.decimals
        # truncated, which is how the published tables report the ratio
        shown = math.floor(value * 10**d) / 10**d
        sys.stdout.write(f"{shown:.{d}f}\n")
        return EXIT_OK
    _emit(args, {"reliability": value}, f"reliability\n{value!r}\n")
    return EXIT_OK


def _common(p, with_model=True):
    if with_model:
        p.add_argument("--model", choices=["lc", "cc"], required=True)
        p.add_argument("--sigma-eps", type=float, help="Laplace scale (lc)")
        p.add_argument("--lambda-eps", type=float, help="wrapped Laplace scale (cc)")
    p.add_argument("--out", help="output path prefix; stdout when omitted")
    p.add_argument("--format", choices=["json", "csv", "both"], default="json")
    p.add_argument("--config", help="JSON file whose keys override flags")


def _tuning(p):
    p.add_argument("--c0", type=float, help="penalty constant (both components)")
    p.add_argument("--c0-2", type=float, help="separate constant for the cosine component")
    p.add_argument("--ss", help="supersmooth closed-form tuning, e.g. gamma=0.005,rho=2")


def _mc(p, reps=50):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--reps", type=int, default=reps)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--grid-kind", choices=["admissible", "simulation"], default="admissible",
                   help="bandwidth candidates for the linear setting")


def build_parser():
    parser = argparse.ArgumentParser(prog="circeiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"circeiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo risk of the adaptive estimator")
    _common(p)
    _tuning(p)
    _mc(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="risk as a function of the tuning constant")
    _common(p)
    _mc(p)
    p.add_argument("--grid", help="comma-separated c0 values (default: published grid)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("estimate", help="estimate a regression curve from a CSV file")
    _common(p, with_model=False)
    _tuning(p)
    p.add_argument("--data", required=True, help="CSV with header distance,direction_radians")
    p.add_argument("--noise", required=True, help="e.g. laplace:0.1, gaussian:0.1, none")
    p.add_argument("--x-grid", help="start:stop:num or comma list (default: 50 points over the data)")
    p.add_argument("--baselines", action="store_true", help="add parametric FL/SPML/trig columns")
    p.add_argument("--grid-kind", choices=["admissible", "simulation"], default="admissible")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("reliability", help="reliability ratio of a benchmark design")
    _common(p)
    p.add_argument("--decimals", type=int, help="truncate the printed value to this many decimals")
    p.set_defaults(func=cmd_reliability)
    return parser


def _apply_config_file(parser, args, argv):
    if not args.config:
        return args
    try:
        overrides = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {args.config}: {exc}") from None
    if not isinstance(overrides, dict):
        raise UsageError("config file must hold a JSON object")
    for key, val in overrides.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in ("func", "command"):
            raise UsageError(f"unknown config key {key!r}")
        setattr(args, attr, val)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        args = _apply_config_file(parser, args, argv)
        return args.func(args)
    except UsageError as exc:
        print(f"circeiv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"circeiv: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ReplicationFailureError) as exc:
        print(f"circeiv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (IllPosedWeightError, UndefinedDirectionError, FloatingPointError) as exc:
        print(f"circeiv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
