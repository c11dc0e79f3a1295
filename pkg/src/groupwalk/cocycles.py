"""Cocycles over the projective and flag actions, and the Cartan projection.

The log-norm cocycle sigma(g, x) = log(||g v|| / ||v||) lives on projective
space; the Iwasawa cocycle reads the log-diagonal of the positive-diagonal
triangular factor of g*k and lives on flags; the Cartan projection is the
sorted vector of log singular values (a function of g alone, not a cocycle).
Both cocycles satisfy sigma(gh, x) = sigma(g, h.x) + sigma(h, x) exactly, and
the Iwasawa coordinates always sum to log|det g|.

All evaluators accept ScaledMatrix inputs, adding the stored log scale where
it belongs (to the scalar value, to every Iwasawa coordinate, to every Cartan
coordinate).
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, InvalidKind
from .matgroup import (
    Flag,
    ProjPoint,
    as_scaled_pair,
    flag_act,
    proj_act,
    proj_dist,
    flag_dist,
    qr_positive,
    random_flag,
    random_proj_point,
    flip_last_column,
    svd,
)
from .rng import derive_stream

COCYCLE_KINDS = ("norm", "iwasawa", "cartan")
DEGENERATE_PAIR_TOL = 1e-12


def norm_cocycle(g, x: ProjPoint) -> float:
    """log of the norm expansion of g at the direction x."""
    m, log_scale = as_scaled_pair(g)
    if m.shape[1] != x.dim:
        raise DimMismatch("matrix and point dimensions differ")
    return float(np.log(np.linalg.norm(m @ x.vec))) + log_scale


def iwasawa_cocycle(g, eta: Flag) -> np.ndarray:
    """Log-diagonal of the triangular factor of g * k, one entry per coordinate."""
    m, log_scale = as_scaled_pair(g)
    if m.shape[1] != eta.dim:
        raise DimMismatch("matrix and flag dimensions differ")
    r = qr_positive(m @ eta.k).r
    return np.log(np.diag(r)) + log_scale


def cartan_projection(g) -> np.ndarray:
    """Nonincreasing vector of log singular values."""
    m, log_scale = as_scaled_pair(g)
    return np.log(svd(m).s) + log_scale


def fiber(eta: Flag) -> int:
    """Connected-component label of a flag: sign of det of the representative."""
    return eta.fiber


def act(kind: str, g, x):
    """Action matching a cocycle kind: projective for norm, flag for iwasawa."""
    if kind == "norm":
        return proj_act(g, x)
    if kind == "iwasawa":
        return flag_act(g, x)
    raise InvalidKind(f"no action for cocycle kind {kind!r}")


def evaluate(kind: str, g, x):
    """Cocycle value as a 1-d array (scalar kinds give length 1)."""
    if kind == "norm":
        return np.array([norm_cocycle(g, x)])
    if kind == "iwasawa":
        return iwasawa_cocycle(g, x)
    if kind == "cartan":
        return cartan_projection(g)
    raise InvalidKind(f"unknown cocycle kind {kind!r}")


def cocycle_identity_residual(kind: str, g, h, x) -> float:
    """Max-abs residual of sigma(gh, x) - sigma(g, h.x) - sigma(h, x).

    Only the norm and iwasawa kinds satisfy the identity; asking for cartan
    raises InvalidKind since the Cartan projection is not a cocycle.
    """
    if kind == "norm":
        gh = np.asarray(as_scaled_pair(g)[0]) @ np.asarray(as_scaled_pair(h)[0])
        lhs = norm_cocycle(gh, x)
        rhs = norm_cocycle(g, proj_act(h, x)) + norm_cocycle(h, x)
        return abs(lhs - rhs)
    if kind == "iwasawa":
        gh = np.asarray(as_scaled_pair(g)[0]) @ np.asarray(as_scaled_pair(h)[0])
        lhs = iwasawa_cocycle(gh, x)
        rhs = iwasawa_cocycle(g, flag_act(h, x)) + iwasawa_cocycle(h, x)
        return float(np.max(np.abs(lhs - rhs)))
    raise InvalidKind(f"cocycle identity undefined for kind {kind!r}")


def sigma_sup_norm(g) -> float:
    """Exact sup over directions of |log norm expansion|: from extreme singular values."""
    m, log_scale = as_scaled_pair(g)
    s = svd(m).s
    return max(abs(float(np.log(s[0])) + log_scale), abs(float(np.log(s[-1])) + log_scale))


def _sample_same_fiber_pair(kind: str, d: int, stream: np.random.Generator):
    if kind == "norm":
        return random_proj_point(d, stream), random_proj_point(d, stream)
    x = random_flag(d, stream)
    y = random_flag(d, stream)
    if y.fiber != x.fiber:
        y = flip_last_column(y)
    return x, y


def _pair_dist(kind: str, x, y) -> float:
    return proj_dist(x, y) if kind == "norm" else flag_dist(x, y)


def kappa0_estimate(mu, kind: str, p: float, x_trials: int = 256, seed: int = 0) -> float:
    """Monte Carlo moment sum(w * kappa0(atom)^p) for the step-regularity proxy.

    kappa0(g) = max(sigma_sup(g), log sigma_lip(g)).  For the norm kind
    sigma_sup is exact (extreme singular values); the Lipschitz factor, and
    both quantities for the iwasawa kind, are sampled maxima over x_trials
    draws, so the estimate is a lower bound that is nondecreasing in x_trials
    at fixed seed.  Degenerate pairs (distance < 1e-12) are skipped.
    """
    if kind not in ("norm", "iwasawa"):
        raise InvalidKind(f"kappa0 supports norm and iwasawa kinds, got {kind!r}")
    total = 0.0
    for i in range(mu.n_atoms):
        g = mu.atoms[i]
        stream = derive_stream(seed, i)
        sup_val = sigma_sup_norm(g) if kind == "norm" else 0.0
        lip = 0.0
        for _ in range(x_trials):
            x, y = _sample_same_fiber_pair(kind, mu.dim, stream)
            base = _pair_dist(kind, x, y)
            if kind == "iwasawa":
                sup_val = max(sup_val, float(np.linalg.norm(iwasawa_cocycle(g, x))))
            if base < DEGENERATE_PAIR_TOL:
                continue
            moved = _pair_dist(kind, act(kind, g, x), act(kind, g, y))
            lip = max(lip, moved / base)
        kappa0 = max(sup_val, float(np.log(lip)) if lip > 0.0 else 0.0)
        total += float(mu.weights[i]) * kappa0**p
    return total
