"""Named reproducible experiments with versioned CSV and JSON outputs.

Every experiment is a pure function of its config: replicate randomness comes
from per-replicate derived streams, reductions run in fixed replicate order,
and parallel fan-out (clt_rate) concatenates chunk results in range order, so
re-runs are byte-identical for any worker count.  Each run writes its data
files plus a manifest JSON recording the config, a content hash of the
config, the package version, and the wall time; partially written outputs
are removed when a run fails.

CSV files carry a versioned first line

    # groupwalk-csv v1 kind=<kind>

followed by a plain header row; the plot tooling and the acceptance checks
parse that line before trusting the columns.
"""

from __future__ import annotations

import functools
import hashlib
import json
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .contraction import (
    ContractionReport,
    contraction_index,
    coupling_coefficient,
    fiber_occupation,
    proximality_decay,
)
from .cocycles import cocycle_identity_residual, iwasawa_cocycle
from .data import BUNDLED, measure_path
from .engine import cocycle_grid, coord_count, driven_sums_at
from .errors import ConfigError, NonPositive, ParseError, TooFewPoints, ZeroMatrix
from .estimators import covariance_reduction, lyapunov, sigma_series
from .matgroup import random_flag, random_proj_point
from .martcouple import (
    DrivenMartingale,
    asip_deviation,
    block_scheme,
    couple_blocks,
    rademacher_martingale,
    simulate_driven,
    twostate_martingale,
)
from .measures import parse_measure, sample_index
from .pmap import map_ranges
from .rng import derive_stream
from .tailbounds import calibrate_cp, fuk_nagaev_bound, maximal_tail_empirical
from .wasserstein import w1_1d_gaussian, w1_exact

CSV_MAGIC = "# groupwalk-csv v1"
EXPERIMENTS = (
    "lyapunov",
    "sigma",
    "clt_rate",
    "asip",
    "contraction",
    "fiber",
    "fuk_nagaev",
    "cocycle_check",
)
MODE_NAMES = {"as": "as_item1", "l1": "l1_item2"}
COCYCLE_NAMES = ("norm", "iwasawa", "cartan")
SIGMA_MAX_LAG = 64
EXACT_W1_SAMPLES = 256
TAIL_THRESHOLDS = (2.0, 2.5, 3.0, 3.5, 4.0, 4.5)   # multiples of sigma * sqrt(n)

_NEEDS_MEASURE = {"lyapunov", "sigma", "contraction", "fiber", "cocycle_check"}
_NEEDS_MARTINGALE = {"asip", "fuk_nagaev"}


def sparse_rademacher_martingale(p: float = 3.0, kick: float = 0.005) -> DrivenMartingale:
    """Centered three-point law: +-1 with probability kick each, else 0.

    A bounded lattice law whose distribution is far from Gaussian at small n
    (the standardized third-moment ratio is ~1/sqrt(2 kick)), so its
    central-limit distance stays measurable above the Monte Carlo floor
    across the whole rate grid.
    """
    if not 0.0 < kick < 0.5:
        raise ConfigError(f"kick must lie in (0, 1/2), got {kick}")
    return DrivenMartingale(
        innov_probs=np.array([[kick, kick, 1.0 - 2.0 * kick]]),
        increments=np.array([[1.0, -1.0, 0.0]]),
        next_state=np.array([[0, 0, 0]]),
        p=p,
    )


MARTINGALES = {
    "rademacher": rademacher_martingale,
    "twostate": twostate_martingale,
    "sparse_rademacher": sparse_rademacher_martingale,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment run.

    measure may be a path to a measure JSON or the name of a bundled measure;
    it is resolved to a path at construction.  martingale is a named driven
    chain from MARTINGALES.  Which of the two is required depends on the
    experiment; clt_rate accepts exactly one.
    """

    experiment: str
    out_dir: str
    measure: str | None = None
    martingale: str | None = None
    cocycle: str = "norm"
    ns: tuple = (64, 256, 1024, 4096)
    replicates: int = 64
    seed: int = 0
    p: float = 3.0
    mode: str = "l1"
    burnin: int = 1024
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown {self.experiment!r}; have {EXPERIMENTS}")
        if self.cocycle not in COCYCLE_NAMES:
            raise ConfigError(f"cocycle: unknown {self.cocycle!r}; have {COCYCLE_NAMES}")
        if self.mode not in MODE_NAMES:
            raise ConfigError(f"mode: unknown {self.mode!r}; have {tuple(MODE_NAMES)}")
        try:
            ns = tuple(int(n) for n in self.ns)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"ns: not an integer grid: {e}") from e
        if len(ns) == 0 or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("ns: must be strictly increasing positive integers")
        object.__setattr__(self, "ns", ns)
        if self.replicates < 1:
            raise ConfigError("replicates: must be at least 1")
        if self.burnin < 0:
            raise ConfigError("burnin: must be nonnegative")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")
        if not 2.0 < self.p <= 3.0:
            raise ConfigError(f"p: must lie in (2, 3], got {self.p}")
        if self.martingale is not None and self.martingale not in MARTINGALES:
            raise ConfigError(
                f"martingale: unknown {self.martingale!r}; have {tuple(MARTINGALES)}"
            )
        if self.measure is not None:
            object.__setattr__(self, "measure", _resolve_measure(self.measure))
        if self.experiment in _NEEDS_MEASURE and self.measure is None:
            raise ConfigError(f"measure: required for the {self.experiment} experiment")
        if self.experiment in _NEEDS_MARTINGALE and self.martingale is None:
            raise ConfigError(f"martingale: required for the {self.experiment} experiment")
        if self.experiment == "clt_rate":
            if (self.measure is None) == (self.martingale is None):
                raise ConfigError("clt_rate needs exactly one source: measure or martingale")
            if len(ns) < 4:
                raise ConfigError("ns: clt_rate needs at least 4 grid points")
        object.__setattr__(self, "out_dir", str(self.out_dir))


def _resolve_measure(spec: str) -> str:
    p = Path(spec)
    if p.exists():
        return str(p)
    if spec in BUNDLED:
        return measure_path(spec)
    raise ConfigError(f"measure: file not found: {spec} (and not a bundled name {BUNDLED})")


def config_hash(cfg: ExperimentConfig) -> str:
    doc = json.dumps(asdict(cfg), sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()


# ------------------------------------------------------------------ output io


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, kind: str, columns, rows) -> str:
    with open(path, "w", newline="") as f:
        f.write(f"{CSV_MAGIC} kind={kind}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    return str(path)


def read_csv(path) -> tuple[str, list[dict]]:
    """Read a versioned CSV back as (kind, list of column->string dicts)."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith(CSV_MAGIC + " kind="):
        raise ParseError(f"{path}: missing '{CSV_MAGIC} kind=...' header line")
    kind = text[0].split("kind=", 1)[1].strip()
    if len(text) < 2:
        raise ParseError(f"{path}: missing column header row")
    columns = text[1].split(",")
    rows = []
    for line in text[2:]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(columns):
            raise ParseError(f"{path}: row width {len(parts)} != header width {len(columns)}")
        rows.append(dict(zip(columns, parts)))
    return kind, rows


def write_json(path, obj) -> str:
    with open(path, "w") as f:
        json.dump(obj, f, sort_keys=True, indent=2)
        f.write("\n")
    return str(path)


# ------------------------------------------------------------------- rate fit


@dataclass(frozen=True)
class RateFit:
    """Least-squares power law through (log x, log y) points."""

    slope: float
    intercept: float
    r2: float
    points: tuple            # ((log x, log y), ...)

    def __post_init__(self):
        if len(self.points) < 3:
            raise TooFewPoints("a rate fit needs at least 3 points")
        if not 0.0 <= self.r2 <= 1.0:
            raise ValueError(f"r2 out of range: {self.r2}")


def loglog_fit(xs, ys) -> RateFit:
    """Fit log y = slope * log x + intercept by least squares."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size:
        raise TooFewPoints("x and y must have equal length")
    if x.size < 3:
        raise TooFewPoints(f"need at least 3 points, got {x.size}")
    if np.any(x <= 0.0):
        raise NonPositive("x values must be positive for a log-log fit")
    if np.any(y <= 0.0):
        raise NonPositive("y values must be positive for a log-log fit")
    if np.unique(x).size < 2:
        raise TooFewPoints("need at least 2 distinct x values")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        r2=float(min(1.0, max(0.0, r2))),
        points=tuple(zip(lx.tolist(), ly.tolist())),
    )


# ------------------------------------------------------------------- running


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    outputs: tuple           # data file paths, in write order
    manifest: str
    summary: dict


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    start = time.time()
    try:
        summary = _DISPATCH[cfg.experiment](cfg, out_dir, written)
    except BaseException:
        for p in written:
            Path(p).unlink(missing_ok=True)
        raise
    manifest = {
        "experiment": cfg.experiment,
        "config": asdict(cfg),
        "config_hash": config_hash(cfg),
        "version": _package_version(),
        "wall_time_s": round(time.time() - start, 3),
        "outputs": [Path(p).name for p in written],
    }
    manifest_path = write_json(out_dir / f"{cfg.experiment}_seed{cfg.seed}_manifest.json", manifest)
    return ExperimentResult(
        config=cfg, outputs=tuple(written), manifest=manifest_path, summary=summary
    )


def _package_version() -> str:
    from . import __version__

    return __version__


def _out(written: list, path: str) -> str:
    written.append(path)
    return path


def _measure(cfg: ExperimentConfig):
    return parse_measure(cfg.measure)


def _martingale(cfg: ExperimentConfig) -> DrivenMartingale:
    return MARTINGALES[cfg.martingale](p=cfg.p)


# -------------------------------------------------------------- experiments


def _run_lyapunov(cfg, out_dir, written):
    mu = _measure(cfg)
    est = lyapunov(
        mu, kind=cfg.cocycle, n=cfg.ns[-1], replicates=cfg.replicates,
        seed=cfg.seed, burnin=cfg.burnin,
    )
    rows = [
        (i, est.mean[i], est.stderr[i], est.n, est.replicates)
        for i in range(est.mean.size)
    ]
    _out(written, write_csv(
        out_dir / f"lyapunov_seed{cfg.seed}.csv", "lyapunov",
        ("coord", "estimate", "stderr", "n", "replicates"), rows,
    ))
    summary = {
        "cocycle": cfg.cocycle,
        "lambda_hat": est.mean.tolist(),
        "stderr": est.stderr.tolist(),
        "n": est.n,
        "replicates": est.replicates,
        "burnin": cfg.burnin,
    }
    _out(written, write_json(out_dir / f"lyapunov_seed{cfg.seed}.json", summary))
    return summary


def _run_sigma(cfg, out_dir, written):
    mu = _measure(cfg)
    est = sigma_series(
        mu, kind=cfg.cocycle, trials=max(cfg.replicates, 8), max_lag=SIGMA_MAX_LAG,
        seed=cfg.seed, burnin=cfg.burnin,
    )
    lam = lyapunov(
        mu, kind=cfg.cocycle, n=cfg.ns[-1], replicates=32,
        seed=cfg.seed + 1, burnin=cfg.burnin,
    )
    c = est.sigma.shape[0]
    rows = [
        (k + 1, i, j, est.terms[k, i, j], est.lag_stderr[k, i, j])
        for k in range(est.n_terms) for i in range(c) for j in range(c)
    ]
    _out(written, write_csv(
        out_dir / f"sigma_series_seed{cfg.seed}.csv", "sigma_series",
        ("lag", "i", "j", "term", "stderr"), rows,
    ))
    try:
        red = covariance_reduction(est.sigma)
        reduction = {
            "rank": red.rank,
            "a": red.a.tolist(),
            "eigenvalues": red.eigenvalues.tolist(),
        }
    except ZeroMatrix:
        reduction = {"rank": 0, "a": None, "eigenvalues": None}
    summary = {
        "cocycle": cfg.cocycle,
        "sigma_hat": est.sigma.tolist(),
        "n_terms": est.n_terms,
        "trials": est.trials,
        "lambda_hat": lam.mean.tolist(),
        "reduction": reduction,
    }
    _out(written, write_json(out_dir / f"sigma_seed{cfg.seed}.json", summary))
    return summary


def _clt_values(cfg) -> np.ndarray:
    """(replicates, grid, coords) raw cocycle values or martingale sums."""
    if cfg.martingale is not None:
        mart = _martingale(cfg)
        fn = functools.partial(driven_sums_at, mart, cfg.ns, seed=cfg.seed)
        sums = map_ranges(fn, cfg.replicates, cfg.workers)
        return sums[:, :, None]
    mu = _measure(cfg)
    fn = functools.partial(
        cocycle_grid, mu, cfg.cocycle, cfg.ns, seed=cfg.seed, burnin=cfg.burnin
    )
    return map_ranges(fn, cfg.replicates, cfg.workers)


def _run_clt_rate(cfg, out_dir, written):
    vals = _clt_values(cfg)
    r_count, g_count, c = vals.shape
    ns = np.asarray(cfg.ns, dtype=float)
    lam = vals[:, -1, :].mean(axis=0) / ns[-1]
    top = range(g_count // 2, g_count)
    if c == 1:
        var_top = [float(vals[:, g, 0].var(ddof=1)) for g in top]
        slope = float(np.polyfit(ns[list(top)], var_top, 1)[0])
        if slope <= 0.0:
            raise NonPositive(f"fitted variance slope {slope} is not positive")
        sigma_sq = slope
        sigma_mat = None
    else:
        cov_top = np.stack([np.cov(vals[:, g, :].T) for g in top])
        sigma_mat = np.empty((c, c))
        for i in range(c):
            for j in range(c):
                sigma_mat[i, j] = np.polyfit(ns[list(top)], cov_top[:, i, j], 1)[0]
        sigma_mat = 0.5 * (sigma_mat + sigma_mat.T)
        eigvals, eigvecs = np.linalg.eigh(sigma_mat)
        if eigvals[-1] <= 0.0:
            raise NonPositive("fitted covariance slope has no positive eigenvalue")
        if eigvals[0] < 0.0:
            warnings.warn("covariance slope clipped to positive semidefinite")
            eigvals = np.maximum(eigvals, 0.0)
            sigma_mat = eigvecs @ np.diag(eigvals) @ eigvecs.T
        sigma_sq = None
    rows = []
    for g, n in enumerate(cfg.ns):
        a = (vals[:, g, :] - n * lam) / np.sqrt(n)
        if c == 1:
            dist = w1_1d_gaussian(a[:, 0], np.sqrt(sigma_sq))
            rows.append((n, dist, "w1_1d_gaussian", r_count, cfg.seed))
        else:
            m = min(r_count, EXACT_W1_SAMPLES)
            eigvals, eigvecs = np.linalg.eigh(sigma_mat)
            root = eigvecs @ np.diag(np.sqrt(np.maximum(eigvals, 0.0))) @ eigvecs.T
            ref = derive_stream(cfg.seed, 999983, g).standard_normal((m, c)) @ root.T
            dist = w1_exact(a[:m], ref)
            rows.append((n, dist, "w1_exact_paired", m, cfg.seed))
    _out(written, write_csv(
        out_dir / f"clt_rate_seed{cfg.seed}.csv", "clt_rate",
        ("n", "distance", "method", "samples", "seed"), rows,
    ))
    fit = loglog_fit([r[0] for r in rows], [r[1] for r in rows])
    summary = {
        "source": cfg.martingale or cfg.measure,
        "cocycle": None if cfg.martingale else cfg.cocycle,
        "lambda_hat": lam.tolist(),
        "sigma_sq_hat": sigma_sq,
        "sigma_hat": None if sigma_mat is None else sigma_mat.tolist(),
        "slope": fit.slope,
        "r2": fit.r2,
        "replicates": r_count,
    }
    _out(written, write_json(out_dir / f"clt_rate_seed{cfg.seed}.json", summary))
    return summary


def _run_asip(cfg, out_dir, written):
    mart = _martingale(cfg)
    mode = MODE_NAMES[cfg.mode]
    summary_rows = []
    medians = {}
    for n in cfg.ns:
        scheme = block_scheme(n, cfg.p, mode)
        level_rows = []
        ratios1, ratios2 = [], []
        for r in range(cfg.replicates):
            path_seed = cfg.seed + 2 * r
            couple_seed = cfg.seed + 2 * r + 1
            path = simulate_driven(mart, n, path_seed)
            cp = couple_blocks(path, scheme, couple_seed)
            dev = asip_deviation(cp)
            summary_rows.append((
                path_seed, n, mode, cfg.p, dev.sup_deviation, dev.first_deviation,
                dev.ratio_item1, dev.ratio_item2,
            ))
            ratios1.append(dev.ratio_item1)
            ratios2.append(dev.ratio_item2)
            for lv, ld in zip(scheme.levels, cp.level_deviations):
                level_rows.append((
                    path_seed, lv.level, lv.m, lv.clamped, lv.block_len,
                    ld.overall, ld.block_ends, ld.within_block,
                ))
        _out(written, write_csv(
            out_dir / f"asip_levels_n{n}_seed{cfg.seed}.csv", "asip",
            ("seed", "level", "m", "clamped", "block_len",
             "overall", "block_ends", "within_block"), level_rows,
        ))
        medians[str(n)] = {
            "ratio_item1": float(np.median(ratios1)),
            "ratio_item2": float(np.median(ratios2)),
        }
    _out(written, write_csv(
        out_dir / f"asip_summary_seed{cfg.seed}.csv", "asip_summary",
        ("seed", "n", "mode", "p", "sup_deviation", "first_deviation",
         "ratio_item1", "ratio_item2"), summary_rows,
    ))
    summary = {
        "martingale": cfg.martingale,
        "mode": mode,
        "p": cfg.p,
        "replicates": cfg.replicates,
        "medians": medians,
    }
    _out(written, write_json(out_dir / f"asip_seed{cfg.seed}.json", summary))
    return summary


def _run_contraction(cfg, out_dir, written):
    mu = _measure(cfg)
    space = "flag" if cfg.cocycle == "iwasawa" else "proj"
    index_hat = contraction_index(
        mu, n0=1, pairs=64, trials=cfg.replicates, seed=cfg.seed, space=space
    )
    decay = proximality_decay(
        mu, n=min(cfg.ns[-1], 512), replicates=max(cfg.replicates, 4),
        seed=cfg.seed + 1, space=space,
    )
    _out(written, write_csv(
        out_dir / f"decay_seed{cfg.seed}.csv", "decay",
        ("k", "estimate", "stderr"),
        list(zip(decay.ks.tolist(), decay.median_logdist.tolist(), decay.stderr.tolist())),
    ))
    kind = "iwasawa" if cfg.cocycle == "iwasawa" else "norm"
    coupling_rows = []
    k = 1
    while k <= min(cfg.ns[-1], 64):
        est, se = coupling_coefficient(
            mu, kind=kind, k=k, q=1.0, pairs=16, trials=128, seed=cfg.seed + 2
        )
        coupling_rows.append((k, est, se))
        k *= 2
    _out(written, write_csv(
        out_dir / f"coupling_seed{cfg.seed}.csv", "coupling",
        ("k", "estimate", "stderr"), coupling_rows,
    ))
    slope = decay.slope
    delta_hat = max(0.0, -slope) if np.isfinite(slope) else 0.0
    report = ContractionReport(
        n0=1, index_hat=index_hat, pair_count=64, trials=cfg.replicates,
        decay_delta_hat=delta_hat,
        note="sampled maxima over 64 pairs; decay slope over the second half"
             + (", saturated at the collapse floor" if decay.saturated else ""),
    )
    summary = {
        "index_hat": report.index_hat,
        "n0": report.n0,
        "pair_count": report.pair_count,
        "trials": report.trials,
        "decay_delta_hat": report.decay_delta_hat,
        "saturated": decay.saturated,
        "note": report.note,
    }
    _out(written, write_json(out_dir / f"contraction_seed{cfg.seed}.json", summary))
    return summary


def _run_fiber(cfg, out_dir, written):
    mu = _measure(cfg)
    occ = fiber_occupation(mu, n=cfg.ns[-1], seed=cfg.seed)
    rows = [
        ("+1", occ["plus"], occ["count_plus"]),
        ("-1", occ["minus"], occ["count_minus"]),
    ]
    _out(written, write_csv(
        out_dir / f"fiber_seed{cfg.seed}.csv", "fiber",
        ("fiber", "fraction", "count"), rows,
    ))
    summary = dict(occ)
    _out(written, write_json(out_dir / f"fiber_seed{cfg.seed}.json", summary))
    return summary


def _run_fuk_nagaev(cfg, out_dir, written):
    mart = _martingale(cfg)
    n = cfg.ns[-1]
    incs = np.empty((cfg.replicates, n))
    for r in range(cfg.replicates):
        incs[r] = simulate_driven(mart, n, cfg.seed + r).increments
    sigma2 = float(mart.stationary_sd) ** 2
    scale = float(mart.stationary_sd) * np.sqrt(n)
    xs = [t * scale for t in TAIL_THRESHOLDS]
    emps = [maximal_tail_empirical(incs, x) for x in xs]
    c_p = calibrate_cp(n, sigma2, cfg.p, xs[0], emps[0]["wilson_hi"])
    rows = []
    validated = []
    for x, emp in zip(xs, emps):
        bound = fuk_nagaev_bound(n, x, sigma2, cfg.p, c_p)
        rows.append((x, emp["estimate"], emp["wilson_hi"], bound.gauss_term, bound.poly_term))
        validated.append(bool(emp["wilson_hi"] <= bound.total))
    _out(written, write_csv(
        out_dir / f"tail_bound_seed{cfg.seed}.csv", "tail_bound",
        ("x", "empirical", "wilson_hi", "bound_first_term", "bound_second_term"), rows,
    ))
    summary = {
        "martingale": cfg.martingale,
        "n": n,
        "replicates": cfg.replicates,
        "p": cfg.p,
        "sigma2": sigma2,
        "c_p": c_p,
        "anchor_x": xs[0],
        "validated": validated[1:],
    }
    _out(written, write_json(out_dir / f"fuk_nagaev_seed{cfg.seed}.json", summary))
    return summary


def _run_cocycle_check(cfg, out_dir, written):
    mu = _measure(cfg)
    d = mu.dim
    worst = {"norm": 0.0, "iwasawa": 0.0, "iwasawa_logdet": 0.0}
    logdets = np.log(np.abs(np.linalg.det(mu.atoms)))
    for t in range(cfg.replicates):
        stream = derive_stream(cfg.seed, t)
        g = mu.atoms[sample_index(mu, stream)]
        h = mu.atoms[sample_index(mu, stream)]
        x = random_proj_point(d, stream)
        eta = random_flag(d, stream)
        worst["norm"] = max(worst["norm"], cocycle_identity_residual("norm", g, h, x))
        worst["iwasawa"] = max(
            worst["iwasawa"], cocycle_identity_residual("iwasawa", g, h, eta)
        )
        a = sample_index(mu, stream)
        worst["iwasawa_logdet"] = max(
            worst["iwasawa_logdet"],
            abs(float(np.sum(iwasawa_cocycle(mu.atoms[a], eta))) - float(logdets[a])),
        )
    rows = [(k, cfg.replicates, v) for k, v in worst.items()]
    _out(written, write_csv(
        out_dir / f"cocycle_check_seed{cfg.seed}.csv", "cocycle_check",
        ("kind", "trials", "max_residual"), rows,
    ))
    summary = {"trials": cfg.replicates, "max_residuals": worst}
    _out(written, write_json(out_dir / f"cocycle_check_seed{cfg.seed}.json", summary))
    return summary


_DISPATCH = {
    "lyapunov": _run_lyapunov,
    "sigma": _run_sigma,
    "clt_rate": _run_clt_rate,
    "asip": _run_asip,
    "contraction": _run_contraction,
    "fiber": _run_fiber,
    "fuk_nagaev": _run_fuk_nagaev,
    "cocycle_check": _run_cocycle_check,
}
