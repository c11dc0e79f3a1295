"""Maximal-inequality tail bounds for martingale partial sums.

The bound combines a Gaussian-type term driven by the conditional variance
with a polynomial term driven by the p-th increment moment:

    P(max_k |S_k| >= x)  <=  7 * 2^(2p - 1/2) * (n s2 / x^2)^(p + 1/2)
                             * exp(-x^2 / (8 n s2))  +  c_p * n / x^p.

The constant c_p is not pinned down by theory at a usable size, so the
calibration helper fits it once at an anchor threshold from an empirical
upper confidence limit, after which the bound can be validated at larger
thresholds against fresh simulations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadExponent, ValidationError

WILSON_Z = 1.959963984540054    # two-sided 95% normal quantile


@dataclass(frozen=True)
class TailBound:
    total: float             # raw two-term value, can exceed 1
    gauss_term: float
    poly_term: float

    @property
    def clamped(self) -> float:
        """Probability-scale value for reporting."""
        return min(1.0, self.total)


def fuk_nagaev_bound(n: int, x: float, sigma2: float, p: float, c_p: float) -> TailBound:
    """Evaluate the two-term maximal tail bound at threshold x."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    if x <= 0.0 or not np.isfinite(x):
        raise ValidationError("threshold x must be positive and finite")
    if sigma2 <= 0.0 or not np.isfinite(sigma2):
        raise ValidationError("sigma2 must be positive and finite")
    if not 2.0 < p <= 3.0:
        raise BadExponent(f"moment exponent must lie in (2, 3], got {p}")
    if c_p < 0.0:
        raise ValidationError("c_p must be nonnegative")
    ratio = n * sigma2 / (x * x)
    gauss = 7.0 * 2.0 ** (2.0 * p - 0.5) * ratio ** (p + 0.5) * np.exp(-(x * x) / (8.0 * n * sigma2))
    poly = c_p * n / x**p
    return TailBound(total=float(gauss + poly), gauss_term=float(gauss), poly_term=float(poly))


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; safe at 0 successes."""
    if trials < 1 or successes < 0 or successes > trials:
        raise ValidationError("need 0 <= successes <= trials with trials >= 1")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1.0 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def maximal_tail_empirical(increments, x: float) -> dict:
    """Empirical tail of the running maximum of signed partial sums.

    increments is (R, n): R independent paths of n martingale increments.
    Returns the exceedance frequency of max_k S_k >= x with its 95% Wilson
    interval; x may be any finite real.  Feeding all paths of a finite
    enumeration (each path once) makes the frequency an exact probability
    for uniform path laws.
    """
    arr = np.asarray(increments, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError("increments must be a nonempty (R, n) array")
    if not np.isfinite(x):
        raise ValidationError("threshold x must be finite")
    running = np.max(np.cumsum(arr, axis=1), axis=1)
    hits = int(np.sum(running >= x))
    lo, hi = wilson_interval(hits, arr.shape[0])
    return {
        "estimate": hits / arr.shape[0],
        "hits": hits,
        "trials": arr.shape[0],
        "wilson_lo": lo,
        "wilson_hi": hi,
    }


def calibrate_cp(
    n: int, sigma2: float, p: float, x0: float, empirical_hi: float
) -> float:
    """Smallest nonnegative c_p making the bound hold at the anchor threshold.

    empirical_hi should be an upper confidence limit for P(max_k S_k >= x0)
    (for instance the Wilson upper end), so the returned constant covers the
    anchor with the stated confidence; validation at larger thresholds is the
    caller's job.
    """
    anchor = fuk_nagaev_bound(n, x0, sigma2, p, 0.0)
    if not 0.0 <= empirical_hi <= 1.0:
        raise ValidationError("empirical_hi must be a probability")
    slack = empirical_hi - anchor.gauss_term
    if slack <= 0.0:
        return 0.0
    return float(slack * x0**p / n)
