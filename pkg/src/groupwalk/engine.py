"""Vectorized evaluation of walk functionals over replicate ranges.

Rate experiments need cocycle values at a grid of path lengths for thousands
of independent walks.  The per-element route (measures.walk plus a cocycle
call per product) is the reference; this module batches replicates through
numpy so the same numbers arrive two orders of magnitude faster, and the
tests pin the two routes against each other.

Draw contract: replicate r consumes exactly burnin + max(ns) uniforms from
derive_stream(seed, r) in one call, so results are a pure function of
(seed, r) and never depend on chunking or worker count.  Driven-martingale
replicates use the integer seed `seed + r` through simulate_driven's own
contract.

Cartan values along long products are computed through compound matrices:
the sum of the top i log singular values of A_n equals the top log singular
value of the i-th compound of A_n, which is a product of per-step compounds
and can be renormalized step by step; the exact log-determinant sum closes
the system, so the smallest coordinates come from subtraction instead of
underflowing (the raw bottom singular value of an SL_2 product dies at
n of a few hundred).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidKind, ValidationError
from .martcouple import DrivenMartingale, simulate_driven
from .matgroup import ScaledMatrix, exterior_power, identity_flag, random_flag
from .measures import AtomicMeasure
from .rng import derive_stream

GRID_KINDS = ("norm", "iwasawa", "cartan")


def _check_grid(ns) -> np.ndarray:
    arr = np.asarray(ns, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("need a nonempty 1-d grid of path lengths")
    if arr[0] < 1 or np.any(np.diff(arr) <= 0):
        raise ValidationError("grid lengths must be positive and strictly increasing")
    return arr


def _check_range(lo: int, hi: int):
    if not 0 <= lo < hi:
        raise ValidationError(f"need 0 <= lo < hi, got [{lo}, {hi})")


def _replicate_indices(mu: AtomicMeasure, seed: int, lo: int, hi: int, total: int) -> np.ndarray:
    idx = np.empty((hi - lo, total), dtype=np.int32)
    for j, r in enumerate(range(lo, hi)):
        u = derive_stream(seed, r).random(total)
        idx[j] = np.searchsorted(mu.cum_weights, u, side="right")
    return idx


def coord_count(kind: str, d: int) -> int:
    if kind == "norm":
        return 1
    if kind in ("iwasawa", "cartan"):
        return d
    raise InvalidKind(f"unknown cocycle kind {kind!r}")


def cocycle_grid(
    mu: AtomicMeasure,
    kind: str,
    ns,
    lo: int,
    hi: int,
    seed: int,
    burnin: int = 0,
) -> np.ndarray:
    """Cocycle values of A_n at every grid length, for replicates [lo, hi).

    Returns (hi - lo, len(ns), c) with c = 1 for the norm kind and c = d
    otherwise.  For norm and iwasawa the start point (first basis direction,
    identity flag) is evolved through `burnin` unrecorded steps first; for
    cartan the value has no start point, so the first `burnin` draws are
    discarded, which keeps the per-replicate draw count identical across
    kinds.
    """
    ns = _check_grid(ns)
    _check_range(lo, hi)
    if burnin < 0:
        raise ValidationError("burnin must be nonnegative")
    if kind not in GRID_KINDS:
        raise InvalidKind(f"unknown cocycle kind {kind!r}")
    total = burnin + int(ns[-1])
    idx = _replicate_indices(mu, seed, lo, hi, total)
    if kind == "norm":
        return _norm_grid(mu, idx, burnin, ns)
    if kind == "iwasawa":
        return _iwasawa_grid(mu, idx, burnin, ns)
    return _cartan_grid(mu, idx, burnin, ns)


def _norm_grid(mu: AtomicMeasure, idx: np.ndarray, burnin: int, ns: np.ndarray) -> np.ndarray:
    r_count, total = idx.shape
    d = mu.dim
    out = np.empty((r_count, ns.size, 1))
    v = np.zeros((r_count, d))
    v[:, 0] = 1.0
    acc = np.zeros(r_count)
    next_rec = 0
    for k in range(total):
        w = np.einsum("rij,rj->ri", mu.atoms[idx[:, k]], v)
        nrm = np.linalg.norm(w, axis=1)
        v = w / nrm[:, None]
        if k >= burnin:
            acc += np.log(nrm)
            if next_rec < ns.size and k - burnin + 1 == ns[next_rec]:
                out[:, next_rec, 0] = acc
                next_rec += 1
    return out


def _iwasawa_grid(mu: AtomicMeasure, idx: np.ndarray, burnin: int, ns: np.ndarray) -> np.ndarray:
    r_count, total = idx.shape
    d = mu.dim
    out = np.empty((r_count, ns.size, d))
    flags = np.broadcast_to(np.eye(d), (r_count, d, d)).copy()
    acc = np.zeros((r_count, d))
    next_rec = 0
    for k in range(total):
        q, r = np.linalg.qr(np.einsum("rij,rjk->rik", mu.atoms[idx[:, k]], flags))
        diag = np.einsum("rii->ri", r)
        signs = np.where(diag < 0.0, -1.0, 1.0)
        flags = q * signs[:, None, :]
        if k >= burnin:
            acc += np.log(diag * signs)
            if next_rec < ns.size and k - burnin + 1 == ns[next_rec]:
                out[:, next_rec] = acc
                next_rec += 1
    return out


def _cartan_grid(mu: AtomicMeasure, idx: np.ndarray, burnin: int, ns: np.ndarray) -> np.ndarray:
    r_count, total = idx.shape
    d = mu.dim
    out = np.empty((r_count, ns.size, d))
    comps = [
        np.stack([exterior_power(mu.atoms[a], i) for a in range(mu.n_atoms)])
        for i in range(1, d)
    ]
    logdets_per_atom = np.log(np.abs(np.linalg.det(mu.atoms)))
    running = [np.broadcast_to(np.eye(c.shape[1]), (r_count, c.shape[1], c.shape[1])).copy()
               for c in comps]
    scales = np.zeros((r_count, d - 1))
    logdet = np.zeros(r_count)
    next_rec = 0
    for k in range(burnin, total):
        step = idx[:, k]
        logdet += logdets_per_atom[step]
        for i in range(d - 1):
            prod = np.einsum("rij,rjk->rik", comps[i][step], running[i])
            frob = np.linalg.norm(prod, axis=(1, 2))
            running[i] = prod / frob[:, None, None]
            scales[:, i] += np.log(frob)
        if next_rec < ns.size and k - burnin + 1 == ns[next_rec]:
            partial = np.zeros((r_count, d + 1))
            for i in range(d - 1):
                top = np.linalg.svd(running[i], compute_uv=False)[:, 0]
                partial[:, i + 1] = np.log(top) + scales[:, i]
            partial[:, d] = logdet
            out[:, next_rec] = np.diff(partial, axis=1)
            next_rec += 1
    return out


def driven_sums_at(mart: DrivenMartingale, ns, lo: int, hi: int, seed: int) -> np.ndarray:
    """Partial sums of a driven martingale at every grid length, replicates [lo, hi).

    Replicate r runs simulate_driven with the integer seed `seed + r`.
    Returns (hi - lo, len(ns)) raw (unstandardized) sums.
    """
    ns = _check_grid(ns)
    _check_range(lo, hi)
    out = np.empty((hi - lo, ns.size))
    at = ns - 1
    for j, r in enumerate(range(lo, hi)):
        path = simulate_driven(mart, int(ns[-1]), seed + r)
        out[j] = np.cumsum(path.increments)[at]
    return out


@dataclass(frozen=True)
class SigmaKappaPath:
    """One walk's Iwasawa and Cartan vectors at a grid of lengths.

    sigma_vals[g] is the Iwasawa cocycle of A_n at the start flag, kappa_vals[g]
    the Cartan vector of the same product, deviation[g] their euclidean gap;
    the two agree in the limit for every coordinate, so the gap staying bounded
    along n is the checkable signature.
    """

    ns: np.ndarray
    start: str
    sigma_vals: np.ndarray   # (G, d)
    kappa_vals: np.ndarray   # (G, d)
    deviation: np.ndarray    # (G,)


def sigma_kappa_deviation(
    mu: AtomicMeasure,
    ns,
    seed: int,
    start: str = "random",
) -> SigmaKappaPath:
    """Walk one path and record sigma_iwasawa(A_n, eta) against kappa(A_n).

    start = "random" draws a Haar start flag (d*d normals, before the step
    uniforms) from the same per-seed stream; "identity" starts at the
    identity flag.  Both cocycle routes share the single step sequence, so
    the deviation is a within-path quantity.  Kappa uses the compound-matrix
    route (see module docstring) and stays finite for any grid length.
    """
    ns = _check_grid(ns)
    if start not in ("random", "identity"):
        raise InvalidKind(f"start must be 'random' or 'identity', got {start!r}")
    d = mu.dim
    stream = derive_stream(seed)
    eta = random_flag(d, stream) if start == "random" else identity_flag(d)
    u = stream.random(int(ns[-1]))
    idx = np.searchsorted(mu.cum_weights, u, side="right")
    comps = [
        [exterior_power(mu.atoms[a], i) for a in range(mu.n_atoms)]
        for i in range(2, d)
    ]
    logdets_per_atom = np.log(np.abs(np.linalg.det(mu.atoms)))
    prod = None
    compound_prods = [None] * len(comps)
    logdet = 0.0
    flag = eta.k.copy()
    sig_acc = np.zeros(d)
    sig = np.empty((ns.size, d))
    kap = np.empty((ns.size, d))
    next_rec = 0
    for k in range(int(ns[-1])):
        a = int(idx[k])
        step = mu.atoms[a]
        q, r = np.linalg.qr(step @ flag)
        diag = np.diag(r)
        signs = np.where(diag < 0.0, -1.0, 1.0)
        flag = q * signs[None, :]
        sig_acc += np.log(diag * signs)
        prod = ScaledMatrix.from_matrix(step) if prod is None else prod.left_multiply(step)
        for i in range(len(comps)):
            c = comps[i][a]
            compound_prods[i] = (
                ScaledMatrix.from_matrix(c)
                if compound_prods[i] is None
                else compound_prods[i].left_multiply(c)
            )
        logdet += float(logdets_per_atom[a])
        if next_rec < ns.size and k + 1 == ns[next_rec]:
            partial = np.zeros(d + 1)
            partial[1] = float(np.log(np.linalg.svd(prod.mat, compute_uv=False)[0])) + prod.log_scale
            for i in range(len(comps)):
                sm = compound_prods[i]
                partial[i + 2] = float(np.log(np.linalg.svd(sm.mat, compute_uv=False)[0])) + sm.log_scale
            partial[d] = logdet
            sig[next_rec] = sig_acc
            kap[next_rec] = np.diff(partial)
            next_rec += 1
    dev = np.linalg.norm(sig - kap, axis=1)
    return SigmaKappaPath(ns=ns, start=start, sigma_vals=sig, kappa_vals=kap, deviation=dev)
