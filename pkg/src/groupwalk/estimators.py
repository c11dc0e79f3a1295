"""Estimation of drift vectors, asymptotic covariance, and moment functionals.

The drift (top Lyapunov data) is the almost-sure limit of cocycle values over
n; the asymptotic covariance admits two independent routes that tests compare:
a stationary covariance series over increments and a batch-means estimator
over one long path.  covariance_reduction factors a covariance into a change
of basis whose image covariance is a rank-m identity block, and envelope_norm
evaluates the weighted upper-quantile integral used to size coupling errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadExponent,
    InvalidKind,
    TooShort,
    ValidationError,
    ZeroMatrix,
)
from .matgroup import ScaledMatrix, exterior_power, qr_positive, svd
from .measures import AtomicMeasure
from .normquant import norm_ppf
from .rng import derive_stream

RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-9
MIN_BATCHES = 10
GL_NODES = 32
FIRST_PIECE_SPLITS = 12


# --------------------------------------------------------------- walk stepping


class _NormState:
    """Unit direction carried along a walk; increments are log expansions."""

    def __init__(self, d: int):
        self.v = np.zeros(d)
        self.v[0] = 1.0

    def step(self, m: np.ndarray) -> np.ndarray:
        w = m @ self.v
        nrm = float(np.linalg.norm(w))
        self.v = w / nrm
        return np.array([np.log(nrm)])


class _FlagState:
    """Orthogonal representative carried along a walk; increments are the
    log-diagonals of the triangular factors.

    Uses the library QR with the positive-diagonal sign fix folded in; this
    matches qr_positive exactly (tested there) at a fraction of the cost,
    which matters in these per-step loops.
    """

    def __init__(self, d: int):
        self.k = np.eye(d)

    def step(self, m: np.ndarray) -> np.ndarray:
        q, r = np.linalg.qr(m @ self.k)
        signs = np.sign(np.diag(r))
        self.k = q * signs
        return np.log(np.diag(r) * signs)


def _make_state(kind: str, d: int):
    if kind == "norm":
        return _NormState(d)
    if kind == "iwasawa":
        return _FlagState(d)
    raise InvalidKind(f"unknown incremental cocycle kind {kind!r}")


def _coord_count(kind: str, d: int) -> int:
    return 1 if kind == "norm" else d


def _sample_indices(mu: AtomicMeasure, stream, n: int) -> np.ndarray:
    u = stream.random(n)
    return np.searchsorted(mu.cum_weights, u, side="right")


# ------------------------------------------------------------------- lyapunov


@dataclass(frozen=True)
class LyapunovEstimate:
    kind: str
    n: int
    replicates: int
    values: np.ndarray      # (replicates, c) per-replicate time averages
    mean: np.ndarray        # (c,)
    stderr: np.ndarray      # (c,)


def lyapunov(
    mu: AtomicMeasure,
    kind: str = "norm",
    n: int = 4096,
    replicates: int = 32,
    seed: int = 0,
    burnin: int = 512,
) -> LyapunovEstimate:
    """Time-averaged cocycle values over independent walks.

    For the norm and iwasawa kinds each replicate burns in the start point
    with `burnin` unrecorded steps, then averages increments over n fresh
    steps.  The cartan kind averages the log singular value vector of the
    n-step product, computed through compound matrices so that all d
    coordinates survive long products (burnin does not apply: the value does
    not depend on a start point).  Replicate r draws from
    derive_stream(seed, r), so results do not depend on evaluation order.
    """
    if n < 1 or replicates < 1:
        raise ValidationError("need n >= 1 and replicates >= 1")
    d = mu.dim
    if kind == "cartan":
        c = d
    else:
        c = _coord_count(kind, d)
    values = np.empty((replicates, c))
    for r in range(replicates):
        stream = derive_stream(seed, r)
        if kind == "cartan":
            idx = _sample_indices(mu, stream, n)
            values[r] = _cartan_of_product(mu, idx) / n
            continue
        state = _make_state(kind, d)
        for i in _sample_indices(mu, stream, burnin):
            state.step(mu.atoms[i])
        total = np.zeros(c)
        for i in _sample_indices(mu, stream, n):
            total += state.step(mu.atoms[i])
        values[r] = total / n
    mean = values.mean(axis=0)
    sd = values.std(axis=0, ddof=1) if replicates > 1 else np.zeros(c)
    return LyapunovEstimate(
        kind=kind, n=n, replicates=replicates, values=values,
        mean=mean, stderr=sd / np.sqrt(replicates),
    )


def _cartan_of_product(mu: AtomicMeasure, idx: np.ndarray) -> np.ndarray:
    """Log singular values of a long left product, via compound matrices.

    The sum of the top i log singular values equals the top log singular
    value of the i-th compound of the product, which is itself a product of
    per-step compounds and can be renormalized step by step.  The full log
    determinant closes the system, so small singular values are recovered by
    subtraction instead of underflowing.
    """
    d = mu.dim
    n = idx.shape[0]
    compounds = [
        [exterior_power(mu.atoms[a], i) for a in range(mu.n_atoms)]
        for i in range(1, d)
    ]
    logdets = np.log(np.abs(np.linalg.det(mu.atoms)))
    partial = np.zeros(d + 1)
    running = [ScaledMatrix.from_matrix(np.eye(c[0].shape[0])) for c in compounds]
    for k in range(n):
        for i in range(d - 1):
            running[i] = running[i].left_multiply(compounds[i][idx[k]])
    partial[d] = float(np.sum(logdets[idx]))
    for i in range(d - 1):
        top = float(np.log(svd(running[i].mat).s[0]))
        partial[i + 1] = running[i].log_scale + top
    return np.diff(partial)


# --------------------------------------------------------- covariance (series)


@dataclass(frozen=True)
class SigmaSeriesEstimate:
    sigma: np.ndarray        # (c, c) symmetric
    n_terms: int             # lags actually accumulated (1 = variance only)
    max_lag: int
    terms: np.ndarray        # (max_lag, c, c): lag-1 variance then cross terms
    trials: int
    lag_stderr: np.ndarray   # (max_lag, c, c) per-entry sampling error scale


def sigma_series(
    mu: AtomicMeasure,
    kind: str = "norm",
    trials: int = 512,
    max_lag: int = 64,
    seed: int = 0,
    burnin: int = 512,
) -> SigmaSeriesEstimate:
    """Asymptotic covariance from the stationary increment covariance series.

    Each trial burns in a start point, then records max_lag increments; the
    estimate is Var(v_1) plus symmetrized cross-covariances Cov(v_1, v_k) for
    k >= 2, truncated adaptively at the first run of three consecutive lags
    whose largest entry is below twice its own sampling error (all lags are
    used if no such run appears).
    """
    if trials < 8:
        raise TooShort("need at least 8 trials for a covariance series")
    if max_lag < 1:
        raise ValidationError("max_lag must be at least 1")
    d = mu.dim
    c = _coord_count(kind, d)
    incs = np.empty((trials, max_lag, c))
    for t in range(trials):
        stream = derive_stream(seed, t)
        state = _make_state(kind, d)
        for i in _sample_indices(mu, stream, burnin):
            state.step(mu.atoms[i])
        for k, i in enumerate(_sample_indices(mu, stream, max_lag)):
            incs[t, k] = state.step(mu.atoms[i])
    centered = incs - incs.mean(axis=0, keepdims=True)
    sds = incs.std(axis=0, ddof=1)                       # (max_lag, c)
    terms = np.empty((max_lag, c, c))
    lag_stderr = np.empty((max_lag, c, c))
    terms[0] = centered[:, 0].T @ centered[:, 0] / (trials - 1)
    for k in range(max_lag):
        if k > 0:
            terms[k] = centered[:, 0].T @ centered[:, k] / (trials - 1)
        lag_stderr[k] = sds[0][:, None] * sds[k][None, :] / np.sqrt(trials)
    sigma = terms[0].copy()
    n_terms = 1
    quiet = 0
    for k in range(1, max_lag):
        if np.max(np.abs(terms[k])) < 2.0 * np.max(lag_stderr[k]):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        sigma += terms[k] + terms[k].T
        n_terms = k + 1
    sigma = 0.5 * (sigma + sigma.T)
    return SigmaSeriesEstimate(
        sigma=sigma, n_terms=n_terms, max_lag=max_lag, terms=terms, trials=trials,
        lag_stderr=lag_stderr,
    )


# ---------------------------------------------------- covariance (batch means)


@dataclass(frozen=True)
class CovarianceEstimate:
    sigma: np.ndarray        # (c, c)
    rel_stderr: float        # entrywise relative sampling error scale
    n_batches: int


def sigma_batch_means(values, batch_len: int) -> CovarianceEstimate:
    """Asymptotic covariance of a stationary sequence from batch sums.

    values is (n,) or (n, c) of increments along one path; batches of length
    batch_len are summed, and the covariance of batch sums divided by
    batch_len estimates the long-run covariance.  Requires at least 10 full
    batches (TooShort below).  The quoted relative error sqrt(2 / (nb - 1))
    is the Gaussian chi-square scale for diagonal entries.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValidationError("values must be (n,) or (n, c)")
    if batch_len < 1:
        raise ValidationError("batch_len must be positive")
    n = arr.shape[0]
    nb = n // batch_len
    if nb < MIN_BATCHES:
        raise TooShort(f"{n} values give {nb} batches of {batch_len}; need {MIN_BATCHES}")
    trimmed = arr[: nb * batch_len] - arr[: nb * batch_len].mean(axis=0, keepdims=True)
    sums = trimmed.reshape(nb, batch_len, -1).sum(axis=1)
    sums -= sums.mean(axis=0, keepdims=True)
    sigma = sums.T @ sums / ((nb - 1) * batch_len)
    return CovarianceEstimate(
        sigma=0.5 * (sigma + sigma.T),
        rel_stderr=float(np.sqrt(2.0 / (nb - 1))),
        n_batches=nb,
    )


# -------------------------------------------------------- covariance reduction


@dataclass(frozen=True)
class Reduction:
    a: np.ndarray            # change of basis: a @ sigma @ a.T = rank-m identity block
    a_inv: np.ndarray
    rank: int
    eigenvalues: np.ndarray  # descending, clamped at 0


def covariance_reduction(sigma, rank_tol: float = RANK_TOL) -> Reduction:
    """Factor a symmetric PSD matrix as A Sigma A^T = diag(1,...,1,0,...,0).

    Eigenvalues below rank_tol times the largest count as zero; the padding
    directions reuse the smallest retained eigenvalue so A stays invertible.
    A matrix with no positive eigenvalue raises ZeroMatrix; an eigenvalue
    below -rank_tol * largest raises ValidationError (input not PSD).
    """
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValidationError("covariance must be square")
    scale = float(np.max(np.abs(s))) if s.size else 0.0
    if scale == 0.0:
        raise ZeroMatrix("covariance is identically zero")
    if np.max(np.abs(s - s.T)) > SYMMETRY_TOL * scale:
        raise ValidationError("covariance must be symmetric")
    s = 0.5 * (s + s.T)
    eigvals, eigvecs = np.linalg.eigh(s)
    eigvals = eigvals[::-1].copy()
    eigvecs = eigvecs[:, ::-1].copy()
    if eigvals[0] <= 0.0:
        raise ZeroMatrix("covariance has no positive eigenvalue")
    if eigvals[-1] < -rank_tol * eigvals[0]:
        raise ValidationError("covariance has a significantly negative eigenvalue")
    eigvals = np.maximum(eigvals, 0.0)
    rank = int(np.sum(eigvals > rank_tol * eigvals[0]))
    padded = eigvals.copy()
    padded[rank:] = eigvals[rank - 1]
    a = (1.0 / np.sqrt(padded))[:, None] * eigvecs.T
    a_inv = eigvecs * np.sqrt(padded)[None, :]
    return Reduction(a=a, a_inv=a_inv, rank=rank, eigenvalues=eigvals)


# -------------------------------------------------------------- envelope norm


def _gl_nodes(a: np.ndarray, b: np.ndarray):
    """Gauss-Legendre nodes/weights mapped to each [a_i, b_i]; (k, GL) arrays."""
    x, w = np.polynomial.legendre.leggauss(GL_NODES)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return mid[:, None] + half[:, None] * x[None, :], half[:, None] * w[None, :]


def _weight(u: np.ndarray, p: float) -> np.ndarray:
    return np.maximum(1.0, norm_ppf(1.0 - 0.5 * u)) ** (p - 2.0)


def envelope_norm(samples, p: float) -> float:
    """Weighted upper-quantile integral of |X|: int_0^1 w(u) Q(u) du.

    Q is the decreasing upper-tail quantile of |X| (empirical, piecewise
    constant) and w(u) = max(1, normal_quantile(1 - u/2))^(p-2).  Exponents
    p in [2, 3] are supported; at p = 2 the weight is 1 and the value is the
    mean of |X|, and the value never drops below that mean for larger p.
    Integration is exact per quantile step up to Gauss-Legendre error, with
    the first step subdivided geometrically to absorb the slow log blow-up of
    w near u = 0.
    """
    if not 2.0 <= p <= 3.0:
        raise BadExponent(f"envelope exponent must lie in [2, 3], got {p}")
    q = np.sort(np.abs(np.asarray(samples, dtype=float).ravel()))[::-1]
    m = q.size
    if m == 0:
        raise ValidationError("empty sample")
    if not np.all(np.isfinite(q)):
        raise ValidationError("sample contains non-finite values")
    edges = np.arange(m + 1) / m
    # geometric refinement of (0, 1/m]: the weight is unbounded (as a power of
    # log) at 0, so a single panel there would dominate the quadrature error
    first = edges[1] * 0.5 ** np.arange(FIRST_PIECE_SPLITS + 1)[::-1]
    lo = np.concatenate([[0.0], first[:-1], edges[1:-1]])
    hi = np.concatenate([first, edges[2:]])
    vals = np.concatenate([np.full(FIRST_PIECE_SPLITS + 1, q[0]), q[1:]])
    nodes, weights = _gl_nodes(lo, hi)
    pieces = np.sum(_weight(nodes, p) * weights, axis=1)
    return float(np.sum(pieces * vals))
