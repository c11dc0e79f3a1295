"""Command line runner for the named experiments and rate fits.

Every subcommand resolves its options from three layers: built-in defaults,
then a JSON config file given with --config (keys mirror the flag names,
with "n" holding the grid and "out" the output directory), then explicit
flags, which win.  Exit codes: 0 success, 2 bad configuration or unreadable
input, 3 numerical failure inside a run.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from pathlib import Path

from . import __version__
from .engine import cocycle_grid, driven_sums_at
from .errors import ConfigError, GroupwalkError, ParseError
from .experiments import (
    COCYCLE_NAMES,
    MARTINGALES,
    MODE_NAMES,
    ExperimentConfig,
    RateFit,
    loglog_fit,
    read_csv,
    run_experiment,
    write_csv,
)
from .measures import parse_measure
from .pmap import map_ranges

_EXPERIMENT_OF = {
    "estimate-lyapunov": "lyapunov",
    "estimate-sigma": "sigma",
    "verify-clt-rate": "clt_rate",
    "verify-asip": "asip",
    "check-contraction": "contraction",
    "check-fiber": "fiber",
    "check-fuk-nagaev": "fuk_nagaev",
    "check-cocycle": "cocycle_check",
}

_CONFIG_KEYS = (
    "measure", "martingale", "cocycle", "n", "replicates", "seed",
    "p", "mode", "burnin", "workers", "out",
)


def fit_rate(csv_path, x_column: str = "n", y_column: str = "distance") -> RateFit:
    """Least-squares power-law fit of two columns of a versioned CSV."""
    _, rows = read_csv(csv_path)
    if rows and (x_column not in rows[0] or y_column not in rows[0]):
        raise ParseError(
            f"{csv_path}: columns {x_column!r}, {y_column!r} not all present"
        )
    xs = [float(r[x_column]) for r in rows]
    ys = [float(r[y_column]) for r in rows]
    return loglog_fit(xs, ys)


def _parse_grid(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(v) for v in str(text).split(","))
    except ValueError as e:
        raise ConfigError(f"n: expected comma-separated integers, got {text!r}") from e


def _add_run_flags(sp):
    sp.add_argument("--measure", help="path to a measure JSON or a bundled name")
    sp.add_argument("--martingale", choices=tuple(MARTINGALES), help="named driven chain")
    sp.add_argument("--cocycle", choices=COCYCLE_NAMES)
    sp.add_argument("--n", dest="n", help="comma-separated step grid, e.g. 64,256,1024")
    sp.add_argument("--replicates", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--mode", choices=tuple(MODE_NAMES))
    sp.add_argument("--burnin", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--config", help="JSON file whose keys mirror the flags")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupwalk",
        description="random walks on matrix groups: simulation and rate checks",
    )
    parser.add_argument("--version", action="version", version=f"groupwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", *_EXPERIMENT_OF):
        sp = sub.add_parser(name)
        _add_run_flags(sp)
    fr = sub.add_parser("fit-rate")
    fr.add_argument("--in", dest="csv_in", required=True, help="versioned CSV to fit")
    fr.add_argument("--x", default="n", help="x column name")
    fr.add_argument("--y", default="distance", help="y column name")
    return parser


def _merge_options(args) -> dict:
    """Config-file values under explicit flags; flag wins when both given."""
    merged: dict = {}
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config: file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: {path}: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError(f"config: {path}: expected a JSON object")
        for key in doc:
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"config: unknown key {key!r}; have {_CONFIG_KEYS}")
        merged.update(doc)
    for key in _CONFIG_KEYS:
        v = getattr(args, key if key != "n" else "n", None)
        if v is not None:
            merged[key] = v
    if "n" in merged:
        merged["ns"] = _parse_grid(merged.pop("n"))
    if "out" in merged:
        merged["out_dir"] = str(merged.pop("out"))
    return merged


def _run_named(command: str, args) -> int:
    opts = _merge_options(args)
    opts.setdefault("out_dir", ".")
    cfg = ExperimentConfig(experiment=_EXPERIMENT_OF[command], **opts)
    result = run_experiment(cfg)
    print(json.dumps(
        {"experiment": cfg.experiment, "outputs": [Path(p).name for p in result.outputs],
         "manifest": Path(result.manifest).name, "summary": result.summary},
        sort_keys=True, default=str,
    ))
    return 0


def _run_simulate(args) -> int:
    opts = _merge_options(args)
    measure = opts.get("measure")
    martingale = opts.get("martingale")
    if (measure is None) == (martingale is None):
        raise ConfigError("simulate needs exactly one source: measure or martingale")
    ns = opts.get("ns", (64, 256, 1024, 4096))
    replicates = int(opts.get("replicates", 16))
    seed = int(opts.get("seed", 0))
    burnin = int(opts.get("burnin", 0))
    workers = int(opts.get("workers", 1))
    out_dir = Path(opts.get("out_dir", "."))
    if replicates < 1:
        raise ConfigError("replicates: must be at least 1")
    if martingale is not None:
        if martingale not in MARTINGALES:
            raise ConfigError(f"martingale: unknown {martingale!r}")
        mart = MARTINGALES[martingale](p=float(opts.get("p", 3.0)))
        fn = functools.partial(driven_sums_at, mart, ns, seed=seed)
        vals = map_ranges(fn, replicates, workers)[:, :, None]
    else:
        probe = ExperimentConfig(
            experiment="lyapunov", out_dir=str(out_dir), measure=measure,
            cocycle=opts.get("cocycle", "norm"), ns=ns, replicates=replicates,
            seed=seed, burnin=burnin, workers=workers,
        )
        mu = parse_measure(probe.measure)
        fn = functools.partial(
            cocycle_grid, mu, probe.cocycle, probe.ns, seed=seed, burnin=burnin
        )
        vals = map_ranges(fn, replicates, workers)
        ns = probe.ns
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        (r, n, c, vals[r, g, c])
        for r in range(vals.shape[0])
        for g, n in enumerate(ns)
        for c in range(vals.shape[2])
    ]
    path = write_csv(
        out_dir / f"simulate_seed{seed}.csv", "simulate",
        ("replicate", "n", "coord", "value"), rows,
    )
    print(json.dumps({"outputs": [Path(path).name], "replicates": replicates,
                      "grid": list(ns)}, sort_keys=True))
    return 0


def _run_fit_rate(args) -> int:
    fit = fit_rate(args.csv_in, args.x, args.y)
    print(json.dumps(
        {"slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2,
         "points": len(fit.points)},
        sort_keys=True,
    ))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit-rate":
            return _run_fit_rate(args)
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_named(args.command, args)
    except (ConfigError, ParseError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except GroupwalkError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
