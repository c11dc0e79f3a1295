"""Dyadic block coupling of a martingale with an iid Gaussian partial-sum path.

The clock past the first step is cut into dyadic levels ]2^L, 2^{L+1}], each
level into blocks of length 2^{m(L)}.  Within a block the martingale's
increment sum U is pushed through the randomized conditional quantile
transform onto a Gaussian V of variance 2^{m(L)} (exact when a finite-state
chain with a finite innovation alphabet drives the increments, because the
conditional block-sum law is then computable by dynamic programming), and V
is split back into per-step standard normal increments by a conditional
fill.  The running sup |M_k - T_k| between the two partial-sum paths,
normalized by n^{1/p} times a power of log n, is the quantity the
invariance-principle rates control; asip_deviation reports it under both
exponent tunings together with the per-level deviation split.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphabetTooLarge,
    BadExponent,
    InvalidKind,
    TooShort,
    ValidationError,
)
from .normquant import norm_ppf
from .rng import derive_stream

_log = logging.getLogger(__name__)

ATOM_CAP = 10_000_000        # exact conditional support may not pass this many atoms
STOCHASTIC_TOL = 1e-12
CENTER_TOL = 1e-12
MODES = ("as_item1", "l1_item2")

_U_LO = float(np.nextafter(0.0, 1.0))
_U_HI = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class DrivenMartingale:
    """Scalar martingale differences driven by a finite-state chain.

    In state s the chain draws innovation a with probability innov_probs[s, a],
    emits the increment increments[s, a] and moves to next_state[s, a].  Rows
    of innov_probs must be stochastic and each state's increments must average
    to zero under its innovation row, which is exactly the martingale-difference
    property with respect to the filtration generated by the innovations.
    p is the moment exponent used by the block schemes built for the walk.
    """

    innov_probs: np.ndarray      # (states, alphabet), rows stochastic
    increments: np.ndarray       # (states, alphabet), conditionally centered
    next_state: np.ndarray       # (states, alphabet), integer targets
    p: float = 3.0
    transition_matrix: np.ndarray = field(init=False, repr=False)
    stationary_row: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.asarray(self.innov_probs, dtype=float)
        inc = np.asarray(self.increments, dtype=float)
        nxt = np.asarray(self.next_state, dtype=int)
        if w.ndim != 2 or w.shape[0] == 0 or w.shape[1] == 0:
            raise ValidationError("innov_probs must be a nonempty (states, alphabet) array")
        if inc.shape != w.shape or nxt.shape != w.shape:
            raise ValidationError("increments and next_state must match innov_probs in shape")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(inc))):
            raise ValidationError("chain specification contains non-finite entries")
        if np.any(w < 0.0) or np.any(np.abs(w.sum(axis=1) - 1.0) > STOCHASTIC_TOL):
            raise ValidationError(f"innovation rows must be stochastic within {STOCHASTIC_TOL}")
        if np.any(nxt < 0) or np.any(nxt >= w.shape[0]):
            raise ValidationError("next_state entries must index a state")
        drift = np.abs((w * inc).sum(axis=1))
        if np.any(drift > CENTER_TOL):
            raise ValidationError(
                f"increments must be conditionally centered within {CENTER_TOL}, "
                f"worst state drift {drift.max():.3e}")
        if not (2.0 < float(self.p) <= 3.0):
            raise BadExponent(f"moment exponent must lie in (2, 3], got {self.p}")
        s = w.shape[0]
        trans = np.zeros((s, s))
        for i in range(s):
            for a in range(w.shape[1]):
                trans[i, nxt[i, a]] += w[i, a]
        pi = _stationary_row(trans)
        object.__setattr__(self, "innov_probs", w)
        object.__setattr__(self, "increments", inc)
        object.__setattr__(self, "next_state", nxt)
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "transition_matrix", trans)
        object.__setattr__(self, "stationary_row", pi)

    @property
    def n_states(self) -> int:
        return self.innov_probs.shape[0]

    @property
    def n_innovations(self) -> int:
        return self.innov_probs.shape[1]

    @property
    def stationary_sd(self) -> float:
        """Standard deviation of one increment under the stationary start."""
        per_state = (self.innov_probs * self.increments**2).sum(axis=1)
        return float(math.sqrt(float(self.stationary_row @ per_state)))

    def fingerprint(self) -> tuple:
        """Content key used to cache exact block-sum laws."""
        return (self.innov_probs.shape,
                self.innov_probs.tobytes(),
                self.increments.tobytes(),
                self.next_state.tobytes())


def _stationary_row(trans: np.ndarray) -> np.ndarray:
    s = trans.shape[0]
    lhs = np.vstack([trans.T - np.eye(s), np.ones((1, s))])
    rhs = np.concatenate([np.zeros(s), [1.0]])
    pi, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    if np.max(np.abs(lhs @ pi - rhs)) > 1e-9 or np.any(pi < -1e-9):
        raise ValidationError("driving chain has no stationary row")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def rademacher_martingale(p: float = 3.0) -> DrivenMartingale:
    """Single state, increments +-1 with probability 1/2 each: iid signs."""
    return DrivenMartingale(
        innov_probs=np.array([[0.5, 0.5]]),
        increments=np.array([[1.0, -1.0]]),
        next_state=np.array([[0, 0]]),
        p=p,
    )


def twostate_martingale(p: float = 3.0) -> DrivenMartingale:
    """Innovation sign selects the next state; increments are +-1 or +-2.

    The transition rows are both (1/2, 1/2), so the stationary row is
    (1/2, 1/2) and the stationary variance is (1 + 4)/2 = 2.5.  The increment
    scale depends on the previous innovation, which makes the differences a
    genuinely non-iid stationary martingale sequence.
    """
    return DrivenMartingale(
        innov_probs=np.array([[0.5, 0.5], [0.5, 0.5]]),
        increments=np.array([[1.0, -1.0], [2.0, -2.0]]),
        next_state=np.array([[0, 1], [0, 1]]),
        p=p,
    )


@dataclass(frozen=True)
class DrivenPath:
    """A simulated increment path together with its filtration states.

    states has one more entry than increments: states[i] is the chain state
    just before increment i+1 is drawn.  normal marks the special path whose
    increments are iid standard normal (no driving chain; mart is None).
    """

    mart: DrivenMartingale | None
    seed: int
    states: np.ndarray
    innovations: np.ndarray
    increments: np.ndarray
    normal: bool = False

    @property
    def n(self) -> int:
        return self.increments.size


def simulate_driven(mart: DrivenMartingale, n: int, seed: int) -> DrivenPath:
    """Simulate n stationary-start increments from the driving chain.

    Consumes exactly 1 + n uniforms from derive_stream(seed): one for the
    initial state (from the stationary row) and one per step.  When every
    state shares the same innovation row and the same next-state row the
    whole path is computed vectorized from the same draws.
    """
    if n < 1:
        raise ValidationError("need at least one step")
    u = derive_stream(seed).random(n + 1)
    cum_pi = np.cumsum(mart.stationary_row)
    s0 = int(min(np.searchsorted(cum_pi, u[0], side="right"), mart.n_states - 1))
    rows_shared = (np.all(mart.innov_probs == mart.innov_probs[0]) and
                   np.all(mart.next_state == mart.next_state[0]))
    if rows_shared:
        cum = np.cumsum(mart.innov_probs[0])
        innov = np.minimum(np.searchsorted(cum, u[1:], side="right"),
                           mart.n_innovations - 1)
        states = np.empty(n + 1, dtype=int)
        states[0] = s0
        states[1:] = mart.next_state[0, innov]
        incs = mart.increments[states[:-1], innov]
    else:
        states = np.empty(n + 1, dtype=int)
        innov = np.empty(n, dtype=int)
        incs = np.empty(n)
        states[0] = s0
        cums = np.cumsum(mart.innov_probs, axis=1)
        last = mart.n_innovations - 1
        s = s0
        for i in range(n):
            a = int(min(np.searchsorted(cums[s], u[1 + i], side="right"), last))
            innov[i] = a
            incs[i] = mart.increments[s, a]
            s = int(mart.next_state[s, a])
            states[i + 1] = s
    return DrivenPath(mart=mart, seed=int(seed), states=states,
                      innovations=innov, increments=incs)


def normal_path(n: int, seed: int) -> DrivenPath:
    """Path of iid standard normal increments (block coupling becomes exact).

    The conditional block-sum law is then the coupling target itself, so
    couple_blocks short-circuits to V = U for every block.
    """
    if n < 1:
        raise ValidationError("need at least one step")
    incs = derive_stream(seed).standard_normal(n)
    zeros = np.zeros(n, dtype=int)
    return DrivenPath(mart=None, seed=int(seed), states=np.zeros(n + 1, dtype=int),
                      innovations=zeros, increments=incs, normal=True)


@dataclass(frozen=True)
class LevelScheme:
    """One dyadic level ]2^level, 2^{level+1}] split into equal blocks."""

    level: int
    m: int                       # log2 of the block length
    clamped: bool                # True when the mode formula left [0, level]

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.m <= self.level:
            raise ValidationError("block exponent must satisfy 0 <= m <= level")

    @property
    def start(self) -> int:
        """Left end of the level range; the level covers (start, 2*start]."""
        return 2 ** self.level

    @property
    def block_len(self) -> int:
        return 2 ** self.m

    @property
    def block_count(self) -> int:
        return 2 ** (self.level - self.m)

    def interval(self, k: int) -> tuple[int, int]:
        """Bounds (lo, hi] of block k (1-based) in 1-based step indices."""
        if not 1 <= k <= self.block_count:
            raise ValidationError(f"block index must lie in [1, {self.block_count}]")
        return (self.start + (k - 1) * self.block_len, self.start + k * self.block_len)

    def intervals(self) -> list[tuple[int, int]]:
        return [self.interval(k) for k in range(1, self.block_count + 1)]


@dataclass(frozen=True)
class BlockScheme:
    """All dyadic levels fitting below n, with mode-tuned block lengths."""

    n: int
    p: float
    mode: str
    levels: tuple[LevelScheme, ...]

    @property
    def covered(self) -> int:
        """Largest step index any level reaches (a power of two <= n)."""
        return 2 * self.levels[-1].start


def block_scheme(n: int, p: float, mode: str) -> BlockScheme:
    """Build the block scheme for all levels L with 2^{L+1} <= n.

    The block-length exponent is m(L) = floor(2L/p + b log2 L) with
    b = 1/p below p = 3 and b = 1 at p = 3 in as_item1 mode (tuned for the
    almost-sure deviation rate), and m(L) = floor(2L/p - b log2 L) with
    b = 1/p below p = 3 and b = -1/3 at p = 3 in l1_item2 mode (tuned for
    the L1 rate of the running sup).  Values are clamped into [0, L]; the
    clamp is flagged on the level and logged.
    """
    if mode not in MODES:
        raise InvalidKind(f"mode must be one of {MODES}, got {mode!r}")
    p = float(p)
    if not (2.0 < p <= 3.0):
        raise BadExponent(f"moment exponent must lie in (2, 3], got {p}")
    if n < 2:
        raise ValidationError("need n >= 2 for at least one level")
    if mode == "as_item1":
        b = 1.0 / p if p < 3.0 else 1.0
        sign = 1.0
    else:
        b = 1.0 / p if p < 3.0 else -1.0 / 3.0
        sign = -1.0
    levels = []
    top = int(n).bit_length() - 1          # 2^top <= n, levels run to top - 1
    for lvl in range(top):
        if lvl == 0:
            m, clamped = 0, True           # log2(0) diverges; only m = 0 fits anyway
        else:
            raw = math.floor(2.0 * lvl / p + sign * b * math.log2(lvl))
            m = min(max(raw, 0), lvl)
            clamped = m != raw
        if clamped and lvl > 0:
            _log.debug("level %d: m clamped from formula into [0, %d]", lvl, lvl)
        levels.append(LevelScheme(level=lvl, m=m, clamped=clamped))
    return BlockScheme(n=int(n), p=p, mode=mode, levels=tuple(levels))


_DIST_CACHE: dict = {}


def block_sum_distribution(mart: DrivenMartingale, state: int,
                           block_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact law of a block sum given the chain state at the block start.

    Dynamic programming over (state, running sum) pairs, one step per block
    position.  Float sums accumulate left to right exactly as a simulated
    path accumulates them, so a realized block sum is bitwise equal to one of
    the returned atoms.  Results are cached by chain content, start state and
    block length.  AlphabetTooLarge when the candidate-atom bound
    current_atoms * alphabet would pass ATOM_CAP (a conservative bound: merged
    support can be smaller, but lattice-valued increments merge fast and stay
    far below the cap).
    """
    if not 0 <= state < mart.n_states:
        raise ValidationError("start state out of range")
    if block_len < 1:
        raise ValidationError("block length must be positive")
    key = (mart.fingerprint(), int(state), int(block_len))
    hit = _DIST_CACHE.get(key)
    if hit is not None:
        return hit
    alphabet = mart.n_innovations
    cur = {int(state): (np.zeros(1), np.ones(1))}
    for _ in range(block_len):
        atoms_now = sum(vals.size for vals, _ in cur.values())
        if atoms_now * alphabet > ATOM_CAP:
            raise AlphabetTooLarge(
                f"conditional support bound {atoms_now * alphabet} atoms passes "
                f"{ATOM_CAP}; shrink the block length or use the sampled coupling")
        bucket_vals: dict[int, list] = {}
        bucket_mass: dict[int, list] = {}
        for s, (vals, mass) in cur.items():
            for a in range(alphabet):
                pa = mart.innov_probs[s, a]
                if pa == 0.0:
                    continue
                t = int(mart.next_state[s, a])
                bucket_vals.setdefault(t, []).append(vals + mart.increments[s, a])
                bucket_mass.setdefault(t, []).append(mass * pa)
        cur = {t: _merge_atoms(np.concatenate(bucket_vals[t]),
                               np.concatenate(bucket_mass[t]))
               for t in bucket_vals}
    vals = np.concatenate([v for v, _ in cur.values()])
    mass = np.concatenate([m for _, m in cur.values()])
    out = _merge_atoms(vals, mass)
    _DIST_CACHE[key] = out
    return out


def _merge_atoms(vals: np.ndarray, mass: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uq, inv = np.unique(vals, return_inverse=True)
    return uq, np.bincount(inv, weights=mass)


def quantile_couple(atoms: np.ndarray, probs: np.ndarray, value: float,
                    sd: float, jitter: float) -> float:
    """Map one draw from a discrete law onto a centered Gaussian of scale sd.

    Returns sd * norm_ppf(F(value-) + jitter * mass(value)).  When value is a
    draw from (atoms, probs) and jitter an independent uniform, the argument
    of norm_ppf is exactly uniform, so the output is exactly Gaussian; the
    pair (value, output) is the comonotone coupling, which is optimal for the
    1-d transport cost.
    """
    atoms = np.asarray(atoms, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if sd < 0.0 or not (0.0 <= jitter <= 1.0):
        raise ValidationError("need sd >= 0 and jitter in [0, 1]")
    i = int(np.searchsorted(atoms, value))
    if i == atoms.size or atoms[i] != value:
        raise ValidationError("value is not an atom of the discrete law")
    below = float(np.cumsum(probs)[i] - probs[i])
    u = min(max(below + jitter * float(probs[i]), _U_LO), _U_HI)
    return float(sd * norm_ppf(u))


def _fill_block(v: float, block_len: int, gen) -> np.ndarray:
    """Split v into block_len per-step increments, iid N(0,1) when v ~ N(0, block_len).

    Conditional fill: draw block_len iid normals and shift each by the common
    correction (v - their sum) / block_len.  The last entry is then nudged by
    at most a few ulp toward the value that makes the left-to-right float sum
    land on v bitwise; when the running sum's rounding grid is coarser than
    ulp(v) no such float exists and the sum stays within a few ulp of the
    partial-sum scale instead.  A length-1 block consumes no draws and
    returns v itself.
    """
    if block_len == 1:
        return np.array([float(v)])
    z = gen.standard_normal(block_len)
    z += (v - z.sum()) / block_len
    head = float(np.cumsum(z[:-1])[-1])
    last = v - head
    for _ in range(4):
        tot = head + last
        if tot == v:
            break
        last = np.nextafter(last, math.inf if tot < v else -math.inf)
    z[-1] = last
    return z


def skorohod_split(v: float, block_len: int, seed: int) -> np.ndarray:
    """Public wrapper of the conditional fill with its own derived stream."""
    if block_len < 1:
        raise ValidationError("block length must be positive")
    return _fill_block(float(v), int(block_len), derive_stream(seed))


@dataclass(frozen=True)
class LevelDeviation:
    """Deviation split of one level: overall <= block_ends + within_block.

    overall is the sup over the level's range of the running sum of per-step
    deviations measured from the level start; block_ends restricts to block
    boundaries (the cumulative block-sum mismatch); within_block is the sup
    over any block of the deviation from that block's start.  The three are
    evaluated so the triangle inequality holds exactly in float arithmetic.
    """

    level: int
    overall: float
    block_ends: float
    within_block: float


@dataclass(frozen=True)
class CoupledPath:
    """Martingale and Gaussian partial-sum paths over the covered dyadic range.

    The first Gaussian increment is a free standard normal (the block scheme
    starts after step 1).  pairs holds per level the block sums U and their
    coupled Gaussians V; each block's Gaussian increments sum back to its V
    left to right within a few ulp of the partial-sum scale (bitwise for most
    blocks, since the fill nudges its last increment onto the target whenever
    a float there exists).  exact is False when the sampled fallback produced
    approximate couplings.
    """

    scheme: BlockScheme
    seed: int
    exact: bool
    martingale_sums: np.ndarray
    gaussian_sums: np.ndarray
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    level_deviations: tuple[LevelDeviation, ...]
    first_deviation: float
    sup_deviation: float

    @property
    def n(self) -> int:
        return self.martingale_sums.size


def couple_blocks(path: DrivenPath, scheme: BlockScheme, seed: int,
                  method: str = "exact", sampled_size: int = 2048) -> CoupledPath:
    """Couple every block sum with a Gaussian and split it into step increments.

    Per block k of level L the stream derive_stream(seed, L, k) supplies one
    jitter uniform plus the fill normals, so blocks can be processed in any
    order or in parallel without changing the result.  method "exact" uses
    the dynamic-programming conditional law (AlphabetTooLarge when its
    support bound passes ATOM_CAP); "sampled" ranks the realized sum among
    sampled_size simulated block sums instead, which makes V only
    approximately Gaussian, and is flagged by exact=False on the result.
    The iid-normal path short-circuits to V = U, the exact coupling between
    identical laws.
    """
    if method not in ("exact", "sampled"):
        raise InvalidKind(f"method must be 'exact' or 'sampled', got {method!r}")
    if not path.normal and path.mart is None:
        raise ValidationError("path has no driving chain and is not the normal path")
    n_cov = scheme.covered
    if path.n < n_cov:
        raise TooShort(f"path has {path.n} steps, scheme covers {n_cov}")
    d = path.increments[:n_cov]
    z = np.empty(n_cov)
    z[0] = float(derive_stream(seed).standard_normal())
    exact = True
    pairs = []
    for lv in scheme.levels:
        blen, count, start = lv.block_len, lv.block_count, lv.start
        seg = d[start:start + count * blen].reshape(count, blen)
        u_blocks = np.cumsum(seg, axis=1)[:, -1].copy()
        v_blocks = np.empty(count)
        sd = math.sqrt(blen)
        for k in range(count):
            gen = derive_stream(seed, lv.level, k + 1)
            if path.normal:
                v_ideal = float(u_blocks[k])
            else:
                s0 = int(path.states[start + k * blen])
                if method == "exact":
                    atoms, mass = block_sum_distribution(path.mart, s0, blen)
                    jit = float(gen.random())
                    v_ideal = quantile_couple(atoms, mass, float(u_blocks[k]), sd, jit)
                else:
                    exact = False
                    sums = _sample_block_sums(path.mart, s0, blen, sampled_size, gen)
                    jit = float(gen.random())
                    less = int(np.count_nonzero(sums < u_blocks[k]))
                    ties = int(np.count_nonzero(sums == u_blocks[k]))
                    u = (less + jit * (ties + 1.0)) / (sampled_size + 1.0)
                    v_ideal = sd * float(norm_ppf(min(max(u, _U_LO), _U_HI)))
            z[start + k * blen:start + (k + 1) * blen] = _fill_block(v_ideal, blen, gen)
            v_blocks[k] = v_ideal
        pairs.append((u_blocks, v_blocks))
    m_sums = np.cumsum(d)
    t_sums = np.cumsum(z)
    deviations = []
    for lv in scheme.levels:
        blen, count, start = lv.block_len, lv.block_count, lv.start
        err = (d[start:start + count * blen]
               - z[start:start + count * blen]).reshape(count, blen)
        within = np.cumsum(err, axis=1)
        ends = np.cumsum(within[:, -1])
        # one float add per candidate keeps overall <= block_ends + within_block
        # exact in float arithmetic (rounding is monotone)
        cand = np.concatenate(([0.0], ends[:-1]))[:, None] + within
        deviations.append(LevelDeviation(
            level=lv.level,
            overall=float(np.max(np.abs(cand))),
            block_ends=float(np.max(np.abs(ends))),
            within_block=float(np.max(np.abs(within))),
        ))
    return CoupledPath(
        scheme=scheme,
        seed=int(seed),
        exact=exact,
        martingale_sums=m_sums,
        gaussian_sums=t_sums,
        pairs=tuple(pairs),
        level_deviations=tuple(deviations),
        first_deviation=abs(float(d[0] - z[0])),
        sup_deviation=float(np.max(np.abs(m_sums - t_sums))),
    )


def _sample_block_sums(mart: DrivenMartingale, state: int, block_len: int,
                       count: int, gen) -> np.ndarray:
    """Simulate count conditional block sums from the given start state."""
    states = np.full(count, int(state))
    totals = np.zeros(count)
    cums = np.cumsum(mart.innov_probs, axis=1)
    last = mart.n_innovations - 1
    for _ in range(block_len):
        u = gen.random(count)
        innov = np.empty(count, dtype=int)
        for s in np.unique(states):
            sel = states == s
            innov[sel] = np.minimum(np.searchsorted(cums[s], u[sel], side="right"), last)
        totals += mart.increments[states, innov]
        states = mart.next_state[states, innov]
    return totals


def exponent_item1(p: float, eps: float) -> float:
    """Log-power of the almost-sure deviation rate n^{1/p} (log n)^a."""
    return 1.0 + eps if p >= 3.0 else 0.5 + 1.0 / (2.0 * p) + eps


def exponent_item2(p: float) -> float:
    """Log-power of the L1 rate of the running sup, n^{1/p} (log n)^a."""
    return 2.0 / 3.0 if p >= 3.0 else 0.5 - 1.0 / (2.0 * p)


@dataclass(frozen=True)
class DeviationSummary:
    """sup |M - T| over the covered range and its normalized ratios."""

    n: int
    p: float
    eps: float
    sup_deviation: float
    first_deviation: float
    ratio_item1: float
    ratio_item2: float
    levels: tuple[LevelDeviation, ...]


def asip_deviation(coupled: CoupledPath, eps: float = 0.05) -> DeviationSummary:
    """Normalize the coupled path's sup deviation by both rate tunings.

    ratio_item1 divides by n^{1/p} (log n)^{1/2 + 1/(2p) + eps} (with log
    power 1 + eps at p = 3), the almost-sure rate; ratio_item2 divides by
    n^{1/p} (log n)^{1/2 - 1/(2p)} (power 2/3 at p = 3), the L1 rate of the
    running sup.  Logs are natural; n is the covered dyadic length.
    """
    if eps < 0.0:
        raise ValidationError("eps must be nonnegative")
    n = coupled.n
    p = coupled.scheme.p
    base = n ** (1.0 / p)
    logn = math.log(n)
    return DeviationSummary(
        n=n,
        p=p,
        eps=float(eps),
        sup_deviation=coupled.sup_deviation,
        first_deviation=coupled.first_deviation,
        ratio_item1=coupled.sup_deviation / (base * logn ** exponent_item1(p, eps)),
        ratio_item2=coupled.sup_deviation / (base * logn ** exponent_item2(p)),
        levels=coupled.level_deviations,
    )
