"""Command-line interface.

Subcommands expose kernel slices, eigensystem diagnostics, the closed-form
vs eigen-series cross-check, synthetic-data generation, model fit/predict,
and RMSE parameter sweeps.  All tabular output is CSV in the same dialect
the ingest path reads.

Exit codes: 0 success, 1 check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from ._backend import backend_name
from .data import GridSpec, SplitSpec, load_csv, split_by_day, synthesize, write_csv
from .gp import Dataset, FactorizationError, fit, predict_mean, rmse
from .halfline import (HalfLineParams, MercerTruncation, kernel_mercer,
                       kernel_value, orthonormality_residuals)
from .spacetime import GaussianParams, ProductKernelParams

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

CONFIG_KEYS = ("alpha", "delta", "omega", "spatial_shape", "noise_variance", "train_days")


class UsageError(Exception):
    pass


def _params_from_args(args) -> HalfLineParams:
    try:
        return HalfLineParams(alpha=args.alpha, delta=args.delta, omega=args.omega)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise UsageError(f"--grid expects WxHxD (lon x lat x days), got {text!r}")
    try:
        w, h, d = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--grid expects integers, got {text!r}") from None
    return w, h, d


def _grid_from_args(args) -> GridSpec:
    w, h, d = _parse_grid(args.grid)
    try:
        return GridSpec(lon_count=w, lat_count=h, lon0=args.lon0, lat0=args.lat0,
                        step=args.step, day_count=d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_axis(text: str) -> tuple[str, np.ndarray]:
    try:
        name, spec = text.split("=", 1)
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise UsageError(f"--axis expects name=lo:hi:n, got {text!r}") from None
    if n < 1 or not lo <= hi:
        raise UsageError(f"--axis bounds must satisfy lo <= hi and n >= 1, got {text!r}")
    return name.strip(), np.linspace(lo, hi, n)


def _read_config(path) -> dict:
    values: dict[str, float] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in CONFIG_KEYS:
                    raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
                if key in values:
                    raise UsageError(f"{path}:{lineno}: duplicate config key {key!r}")
                try:
                    values[key] = int(val) if key == "train_days" else float(val)
                except ValueError:
                    raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {val.strip()!r}") from None
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    for key in ("alpha", "delta", "omega", "spatial_shape", "train_days"):
        if key not in values:
            raise UsageError(f"config is missing required key {key!r}")
    values.setdefault("noise_variance", 1e-8)
    return values


def _load_or_synthesize(args) -> tuple[GridSpec, Dataset]:
    if args.data == "synthetic":
        grid = _grid_from_args(args)
        return grid, synthesize(grid, seed=args.seed, sigma_noise=args.sigma_noise)
    try:
        return load_csv(args.data)
    except OSError as exc:
        raise UsageError(f"cannot read {args.data!r}: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open_out(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kernel_slice(args) -> int:
    params = _params_from_args(args)
    if not (args.t_min < args.t_max):
        raise UsageError(f"need t-min < t-max, got {args.t_min} >= {args.t_max}")
    if args.count < 2:
        raise UsageError(f"need at least 2 sample points, got {args.count}")
    if args.s < 0:
        raise UsageError(f"s must be >= 0, got {args.s}")
    ts = np.linspace(args.t_min, args.t_max, args.count)
    with _open_out(args.out) as fh:
        fh.write("t,K\n")
        for t in ts:
            fh.write(f"{float(t)!r},{kernel_value(params, float(t), args.s)!r}\n")
    print(f"wrote {args.count} kernel values to {args.out}")
    return EXIT_OK


def cmd_eigen_check(args) -> int:
    params = _params_from_args(args)
    if args.max_order < 0:
        raise UsageError(f"--max-order must be >= 0, got {args.max_order}")
    residuals = orthonormality_residuals(params, args.max_order)
    with np.printoptions(precision=3, linewidth=120):
        print(residuals)
    worst = float(residuals.max())
    print(f"max |residual| = {worst:.3e} (threshold 1e-6)")
    return EXIT_OK if worst <= 1e-6 else EXIT_CHECK_FAILED


def cmd_oracle_check(args) -> int:
    params = _params_from_args(args)
    if not (0.0 < args.box_max <= 50.0):
        raise UsageError(f"--box-max must be in (0, 50], got {args.box_max}")
    if args.grid_points < 1:
        raise UsageError(f"--grid-points must be >= 1, got {args.grid_points}")
    trunc = MercerTruncation()
    grid = np.linspace(0.0, args.box_max, args.grid_points) if args.grid_points > 1 \
        else np.array([0.0])
    worst = 0.0
    failures = 0
    noise_limited = 0
    for t in grid:
        for s in grid:
            res = kernel_mercer(params, trunc, float(t), float(s))
            closed = kernel_value(params, float(t), float(s))
            if not res.converged:
                failures += 1
                print(f"non-converged series at t={t:g} s={s:g} "
                      f"after {res.terms_used} terms")
                continue
            err = abs(closed - res.value)
            if res.resolves(1e-8):
                worst = max(worst, err / abs(res.value))
                if err > 1e-8 * abs(res.value):
                    failures += 1
            else:
                # series noise floor exceeds the target precision there
                noise_limited += 1
                if err > res.noise_bound:
                    failures += 1
    print(f"max relative error (series-resolved points): {worst:.3e}")
    if noise_limited:
        print(f"{noise_limited} points checked against the series noise floor only")
    ok = failures == 0 and worst <= 1e-8
    print("oracle check", "PASSED" if ok else f"FAILED ({failures} failures)")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_synth(args) -> int:
    grid = _grid_from_args(args)
    data = synthesize(grid, seed=args.seed, sigma_noise=args.sigma_noise)
    try:
        write_csv(args.out, data)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out!r}: {exc}") from None
    print(f"wrote {len(data)} observations to {args.out}")
    return EXIT_OK


def _fit_and_score(config: dict, grid: GridSpec, data: Dataset):
    params = ProductKernelParams(
        spatial=GaussianParams(shape=config["spatial_shape"]),
        temporal=HalfLineParams(alpha=config["alpha"], delta=config["delta"],
                                omega=config["omega"]))
    split = SplitSpec(train_days=config["train_days"],
                      test_days=grid.day_count - config["train_days"])
    train, test = split_by_day(grid, data, split)
    model = fit(params, train, config["noise_variance"])
    predicted = predict_mean(model, test.points)
    return test, predicted, rmse(predicted, test.values)


def cmd_fit_predict(args) -> int:
    config = _read_config(args.config)
    grid, data = _load_or_synthesize(args)
    try:
        test, predicted, score = _fit_and_score(config, grid, data)
    except FactorizationError as exc:
        print(f"error: {exc}\nhint: raise noise_variance in the config", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _open_out(args.out) as fh:
        fh.write("lon,lat,day,observed,predicted\n")
        for p, obs, pred in zip(test.points, test.values, predicted):
            fh.write(f"{p.x[0]!r},{p.x[1]!r},{int(round(p.t))},{obs!r},{pred!r}\n")
    print(f"RMSE {score!r} over {len(test)} test points "
          f"({len(data) - len(test)} training points); wrote {args.out}")
    return EXIT_OK


def _sweep_axes(args) -> tuple[np.ndarray, np.ndarray, tuple[str, str]]:
    if args.mode == "alpha-omega":
        names = ("alpha", "omega")
        defaults = {"alpha": np.linspace(-0.9, 3.0, 8),
                    "omega": np.geomspace(0.1, 0.95, 10)}
    else:
        names = ("delta", "omega")
        defaults = {"delta": np.linspace(0.01, 0.49, 8),
                    "omega": np.geomspace(0.1, 0.95, 10)}
    axes = dict(defaults)
    for text in args.axis or ():
        name, values = _parse_axis(text)
        if name not in names:
            raise UsageError(f"mode {args.mode} sweeps {names}, not {name!r}")
        axes[name] = values
    lo, hi = axes["omega"][0], axes["omega"][-1]
    if not (0.0 < lo and hi < 1.0):
        raise UsageError(f"omega axis must stay inside (0, 1), got [{lo}, {hi}]")
    if args.mode == "alpha-omega":
        if axes["alpha"][0] <= -1.0:
            raise UsageError(f"alpha axis must stay above -1, got {axes['alpha'][0]}")
    else:
        dlo, dhi = axes["delta"][0], axes["delta"][-1]
        if not (0.0 < dlo and dhi < 0.5):
            raise UsageError(f"delta axis must stay inside (0, 0.5), got [{dlo}, {dhi}]")
    return axes[names[0]], axes[names[1]], names


def cmd_sweep(args) -> int:
    p1_axis, p2_axis, names = _sweep_axes(args)
    grid, data = _load_or_synthesize(args)
    train_days = args.train_days if args.train_days is not None else grid.day_count - 1
    config = {"spatial_shape": args.spatial_shape, "noise_variance": args.noise_variance,
              "train_days": train_days}
    rows = []
    for p1 in p1_axis:
        for p2 in p2_axis:
            cell = dict(config)
            if args.mode == "alpha-omega":
                cell.update(alpha=float(p1), omega=float(p2),
                            delta=math.sqrt(p2) / (1.0 + math.sqrt(p2)))
            else:
                cell.update(alpha=0.0, delta=float(p1), omega=float(p2))
            try:
                _, _, score = _fit_and_score(cell, grid, data)
                result = repr(score) if math.isfinite(score) else "failed"
            except (FactorizationError, FloatingPointError, ValueError) as exc:
                print(f"cell {names[0]}={p1:g} {names[1]}={p2:g} failed: {exc}",
                      file=sys.stderr)
                result = "failed"
            rows.append((float(p1), float(p2), result))
    with _open_out(args.out) as fh:
        fh.write("p1,p2,rmse\n")
        for p1, p2, result in rows:
            fh.write(f"{p1!r},{p2!r},{result}\n")
    n_failed = sum(1 for r in rows if r[2] == "failed")
    print(f"swept {names[0]} x {names[1]}: {len(rows)} cells "
          f"({n_failed} failed) -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_kernel_params(sub):
    sub.add_argument("--alpha", type=float, required=True, help="shape parameter, > -1")
    sub.add_argument("--delta", type=float, required=True,
                     help="eigenfunction decay rate, in (0, 1/2)")
    sub.add_argument("--omega", type=float, required=True,
                     help="eigenvalue decay / inverse length scale, in (0, 1)")


def _add_synth_flags(sub):
    sub.add_argument("--grid", default="28x29x8", help="lon x lat x days, e.g. 6x6x4")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--sigma-noise", type=float, default=0.1)
    sub.add_argument("--lon0", type=float, default=0.0)
    sub.add_argument("--lat0", type=float, default=0.0)
    sub.add_argument("--step", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halflinegp",
        description="Half-line covariance kernel tools and space-time kriging")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({backend_name()} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-slice", help="tabulate K(t, s) along t for fixed s")
    _add_kernel_params(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--count", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kernel_slice)

    p = sub.add_parser("eigen-check", help="orthonormality residuals of the eigenfunctions")
    _add_kernel_params(p)
    p.add_argument("--max-order", type=int, default=10)
    p.set_defaults(func=cmd_eigen_check)

    p = sub.add_parser("oracle-check",
                       help="closed form vs truncated eigen-series on a grid")
    _add_kernel_params(p)
    p.add_argument("--box-max", type=float, default=20.0)
    p.add_argument("--grid-points", type=int, default=20)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("synth", help="write a synthetic gridded dataset")
    _add_synth_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit-predict",
                       help="fit on leading days, predict the held-out days")
    p.add_argument("data", help="CSV path, or 'synthetic'")
    p.add_argument("--config", required=True,
                   help="key=value file with " + ", ".join(CONFIG_KEYS))
    p.add_argument("--out", required=True)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_fit_predict)

    p = sub.add_parser("sweep", help="grid-sweep two kernel parameters by RMSE")
    p.add_argument("data", help="CSV path, or 'synthetic'")
    p.add_argument("--mode", choices=("alpha-omega", "delta-omega"), required=True)
    p.add_argument("--axis", action="append",
                   help="axis spec name=lo:hi:n (linear); repeatable")
    p.add_argument("--out", required=True)
    p.add_argument("--spatial-shape", type=float, default=0.01)
    p.add_argument("--noise-variance", type=float, default=1e-8)
    p.add_argument("--train-days", type=int, default=None)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
