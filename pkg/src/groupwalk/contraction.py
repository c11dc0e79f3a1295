"""Contraction diagnostics for the projective and flag actions.

Three lenses on the same phenomenon: the n-step contraction index bounds the
worst-pair expected log contraction ratio, the proximality decay curve tracks
how fast a walk collapses two directions, and the coupling coefficient
measures how little a fresh step's cocycle increment distinguishes two
starting points after the walk has run for a while.  fiber_occupation watches
the two-component flag fiber chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidKind, ValidationError
from .cocycles import evaluate
from .matgroup import (
    flag_act,
    flag_dist,
    flip_last_column,
    identity_flag,
    proj_act,
    proj_dist,
    random_flag,
    random_proj_point,
)
from .measures import AtomicMeasure
from .rng import derive_stream

LOG_FLOOR = -700.0           # collapse guard: below this a pair is numerically equal
DEGENERATE_PAIR_TOL = 1e-12


@dataclass(frozen=True)
class ContractionReport:
    """Joint summary of the sampled contraction diagnostics.

    index_hat and decay_delta_hat are sampled lower-bound style estimates
    (suprema over finitely many pairs); note records how they were obtained.
    """

    n0: int
    index_hat: float
    pair_count: int
    trials: int
    decay_delta_hat: float
    note: str

    def __post_init__(self):
        if self.n0 < 1 or self.pair_count < 1 or self.trials < 1:
            raise ValidationError("n0, pair_count and trials must be positive")
        if np.isnan(self.decay_delta_hat) or self.decay_delta_hat < 0.0:
            raise ValidationError("decay_delta_hat must be a nonnegative real")


def _sample_pair(space: str, d: int, stream):
    if space == "proj":
        return random_proj_point(d, stream), random_proj_point(d, stream)
    if space == "flag":
        x = random_flag(d, stream)
        y = random_flag(d, stream)
        if y.fiber != x.fiber:
            y = flip_last_column(y)
        return x, y
    raise InvalidKind(f"space must be 'proj' or 'flag', got {space!r}")


def _dist(space: str, x, y) -> float:
    return proj_dist(x, y) if space == "proj" else flag_dist(x, y)


def _act(space: str, g, x):
    return proj_act(g, x) if space == "proj" else flag_act(g, x)


def contraction_index(
    mu: AtomicMeasure,
    n0: int = 1,
    pairs: int = 64,
    trials: int = 64,
    seed: int = 0,
    space: str = "proj",
) -> float:
    """Sampled sup over pairs of the expected n0-step log contraction ratio.

    For each of `pairs` sampled same-component pairs (x, y), averages
    log(d(g x, g y) / d(x, y)) over `trials` independent n0-step products g,
    then returns the largest average.  Negative values certify average
    contraction on the sampled pairs (the sup is approached from below as
    pairs grows; pair draws are nested in `pairs` at fixed seed).  Log ratios
    are clipped at -700 so fully collapsed pairs do not poison the average.
    """
    if n0 < 1 or pairs < 1 or trials < 1:
        raise ValidationError("n0, pairs and trials must all be positive")
    d = mu.dim
    pair_stream = derive_stream(seed, 0)
    worst = -np.inf
    for i in range(pairs):
        x, y = _sample_pair(space, d, pair_stream)
        base = _dist(space, x, y)
        if base < DEGENERATE_PAIR_TOL:
            continue
        g_stream = derive_stream(seed, 1, i)
        total = 0.0
        for _ in range(trials):
            u = g_stream.random(n0)
            idx = np.searchsorted(mu.cum_weights, u, side="right")
            gx, gy = x, y
            for k in idx:
                gx = _act(space, mu.atoms[k], gx)
                gy = _act(space, mu.atoms[k], gy)
            moved = _dist(space, gx, gy)
            ratio = float(np.log(moved / base)) if moved > 0.0 else -np.inf
            total += max(LOG_FLOOR, ratio)
        worst = max(worst, total / trials)
    if not np.isfinite(worst):
        raise ValidationError("all sampled pairs were degenerate")
    return float(worst)


@dataclass(frozen=True)
class DecayCurve:
    ks: np.ndarray            # (K,) step counts
    median_logdist: np.ndarray
    stderr: np.ndarray        # rough sampling error of the median per k
    slope: float              # per-step decay of the median over the fit window
    fit_lo: int               # first k of the fit window
    saturated: bool           # medians hit the collapse floor inside the window


def proximality_decay(
    mu: AtomicMeasure,
    n: int = 128,
    replicates: int = 64,
    seed: int = 0,
    space: str = "proj",
) -> DecayCurve:
    """Median log-distance between two walked points, per step count.

    Each replicate walks one shared product A_k applied to a fresh random
    same-component pair; the curve records the median of log d(A_k x, A_k y)
    over replicates for every k <= n, and fits a least-squares slope over the
    second half of the range (excluding floor-saturated medians).  The quoted
    stderr is the normal-approximation error of a median, 1.2533 sd/sqrt(R).
    """
    if n < 4 or replicates < 4:
        raise ValidationError("need n >= 4 and replicates >= 4")
    d = mu.dim
    logs = np.empty((replicates, n))
    for r in range(replicates):
        stream = derive_stream(seed, r)
        x, y = _sample_pair(space, d, stream)
        u = stream.random(n)
        idx = np.searchsorted(mu.cum_weights, u, side="right")
        for k in range(n):
            x = _act(space, mu.atoms[idx[k]], x)
            y = _act(space, mu.atoms[idx[k]], y)
            dist = _dist(space, x, y)
            logs[r, k] = max(LOG_FLOOR, np.log(dist)) if dist > 0.0 else LOG_FLOOR
    ks = np.arange(1, n + 1)
    med = np.median(logs, axis=0)
    sd = logs.std(axis=0, ddof=1)
    stderr = 1.2533 * sd / np.sqrt(replicates)
    fit_lo = n // 2
    window = np.arange(fit_lo, n)
    usable = window[med[window] > LOG_FLOOR + 10.0]
    saturated = usable.size < window.size
    if usable.size >= 2:
        slope = float(np.polyfit(ks[usable], med[usable], 1)[0])
    else:
        slope = float("nan")
    return DecayCurve(
        ks=ks, median_logdist=med, stderr=stderr, slope=slope,
        fit_lo=fit_lo + 1, saturated=saturated,
    )


def coupling_coefficient(
    mu: AtomicMeasure,
    kind: str = "norm",
    k: int = 1,
    q: float = 1.0,
    pairs: int = 16,
    trials: int = 128,
    seed: int = 0,
) -> tuple[float, float]:
    """Worst-pair mean of |increment(Y, A_{k-1} x) - increment(Y, A_{k-1} y)|^q.

    A_{k-1} is a fresh (k-1)-step product and Y a fresh step, redrawn every
    trial; the mean over trials is computed per sampled same-component pair
    and the largest mean is returned with its standard error.  Decreasing
    values along k certify that the walk forgets its start point at the rate
    the increments feel.
    """
    if k < 1 or q <= 0.0:
        raise ValidationError("need k >= 1 and q > 0")
    if kind not in ("norm", "iwasawa"):
        raise InvalidKind(f"coupling coefficient supports norm and iwasawa, got {kind!r}")
    space = "proj" if kind == "norm" else "flag"
    d = mu.dim
    pair_stream = derive_stream(seed, 0)
    best_mean = -np.inf
    best_se = float("nan")
    for i in range(pairs):
        x, y = _sample_pair(space, d, pair_stream)
        t_stream = derive_stream(seed, 1, i)
        vals = np.empty(trials)
        for t in range(trials):
            u = t_stream.random(k)
            idx = np.searchsorted(mu.cum_weights, u, side="right")
            gx, gy = x, y
            for j in idx[:-1]:
                gx = _act(space, mu.atoms[j], gx)
                gy = _act(space, mu.atoms[j], gy)
            last = mu.atoms[idx[-1]]
            diff = evaluate(kind, last, gx) - evaluate(kind, last, gy)
            vals[t] = float(np.linalg.norm(diff)) ** q
        mean = float(vals.mean())
        if mean > best_mean:
            best_mean = mean
            best_se = float(vals.std(ddof=1) / np.sqrt(trials))
    return best_mean, best_se


def fiber_occupation(
    mu: AtomicMeasure,
    n: int = 4096,
    seed: int = 0,
    start_fiber: int = 1,
) -> dict:
    """Occupation frequencies of the two flag components along one walk.

    The component label of A_k eta is start_fiber times the product of the
    step determinant signs, so the chain is computed from signs alone; the
    first n // 10 steps are discarded as burn-in.  Returns a dict with the
    two frequencies, the counts, and the burn-in used.
    """
    if n < 10:
        raise ValidationError("need n >= 10")
    if start_fiber not in (1, -1):
        raise ValidationError("start_fiber must be +1 or -1")
    stream = derive_stream(seed)
    u = stream.random(n)
    idx = np.searchsorted(mu.cum_weights, u, side="right")
    signs = mu.det_signs()[idx]
    labels = start_fiber * np.cumprod(signs)
    burn = n // 10
    kept = labels[burn:]
    pos = int(np.sum(kept == 1))
    neg = kept.size - pos
    return {
        "plus": pos / kept.size,
        "minus": neg / kept.size,
        "count_plus": pos,
        "count_minus": neg,
        "burnin": burn,
        "n": n,
    }
