"""Contraction index, proximality decay, coupling coefficient, fiber chain."""

import numpy as np
import pytest

from groupwalk.contraction import (
    contraction_index,
    coupling_coefficient,
    fiber_occupation,
    proximality_decay,
)
from groupwalk.matgroup import flag_act, identity_flag
from groupwalk.measures import AtomicMeasure
from groupwalk.rng import derive_stream

LOG2 = np.log(2.0)


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


def mixing_measure():
    return AtomicMeasure.from_data(
        weights=[0.5, 0.5], atoms=[np.diag([2.0, 0.5]), rotation(0.7)]
    )


# ------------------------------------------------------------ contraction index


def test_index_identity_and_rotation_are_zero():
    # isometries preserve the sine metric up to renormalization roundoff
    ident = AtomicMeasure.from_data(weights=[1.0], atoms=[np.eye(2)])
    assert contraction_index(ident, pairs=16, trials=4, seed=0) == pytest.approx(0.0, abs=1e-12)
    rot = AtomicMeasure.from_data(weights=[1.0], atoms=[rotation(1.2)])
    assert contraction_index(rot, pairs=16, trials=4, seed=0) == pytest.approx(0.0, abs=1e-12)


def test_index_single_diagonal_atom_approaches_log4():
    # [DERIVED] d=2 identity: the one-step ratio is |det| / (e(x) e(y)) with
    # e the norm expansion, so the sup over pairs is s1/s2 = 4, approached
    # from below by sampling
    mu = AtomicMeasure.from_data(weights=[1.0], atoms=[np.diag([2.0, 0.5])])
    idx = contraction_index(mu, n0=1, pairs=256, trials=1, seed=0)
    assert np.log(4.0) - 0.05 < idx <= np.log(4.0) + 1e-9
    # sampled sup is nondecreasing in pairs at fixed seed (nested draws)
    fewer = contraction_index(mu, n0=1, pairs=64, trials=1, seed=0)
    assert fewer <= idx + 1e-15


def test_index_turns_negative_at_larger_block():
    mu = mixing_measure()
    one = contraction_index(mu, n0=1, pairs=32, trials=48, seed=1)
    eight = contraction_index(mu, n0=8, pairs=32, trials=48, seed=1)
    assert one > 0.0  # a single step can expand some pairs on average
    assert eight < -0.5  # eight steps contract every sampled pair on average


def test_index_flag_space_runs():
    mu = mixing_measure()
    val = contraction_index(mu, n0=8, pairs=16, trials=32, seed=2, space="flag")
    assert np.isfinite(val)
    assert val < 0.0


# ----------------------------------------------------------- proximality decay


def test_decay_slope_matches_lyapunov_gap():
    # [DERIVED] commuting diagonal atoms: top/bottom drift is +-1.5 log 2, so
    # pair distances shrink at the gap rate 3 log 2 per step
    mu = AtomicMeasure.from_data(
        weights=[0.5, 0.5], atoms=[np.diag([4.0, 0.25]), np.diag([2.0, 0.5])]
    )
    curve = proximality_decay(mu, n=16, replicates=64, seed=2)
    assert not curve.saturated
    assert curve.slope == pytest.approx(-3.0 * LOG2, abs=0.15)
    assert np.all(curve.stderr >= 0.0)
    assert curve.ks.shape == curve.median_logdist.shape


def test_decay_saturates_at_the_floor():
    mu = AtomicMeasure.from_data(
        weights=[0.5, 0.5], atoms=[np.diag([4.0, 0.25]), np.diag([2.0, 0.5])]
    )
    curve = proximality_decay(mu, n=400, replicates=16, seed=3)
    assert curve.saturated
    assert np.min(curve.median_logdist) >= -700.0


def test_decay_isometry_stays_flat():
    rot = AtomicMeasure.from_data(weights=[1.0], atoms=[rotation(0.9)])
    curve = proximality_decay(rot, n=32, replicates=16, seed=4)
    assert curve.slope == pytest.approx(0.0, abs=1e-10)


# --------------------------------------------------------- coupling coefficient


def test_coupling_zero_for_isometries():
    rot = AtomicMeasure.from_data(weights=[1.0], atoms=[rotation(1.1)])
    val, se = coupling_coefficient(rot, "norm", k=3, pairs=8, trials=16, seed=5)
    assert val == pytest.approx(0.0, abs=1e-12)
    assert se == pytest.approx(0.0, abs=1e-12)


def test_coupling_decreases_with_k():
    mu = mixing_measure()
    c1, _ = coupling_coefficient(mu, "norm", k=1, pairs=12, trials=96, seed=6)
    c8, _ = coupling_coefficient(mu, "norm", k=8, pairs=12, trials=96, seed=6)
    assert c1 > 0.1
    assert c8 < 0.6 * c1


def test_coupling_iwasawa_kind_runs():
    mu = mixing_measure()
    c1, se1 = coupling_coefficient(mu, "iwasawa", k=1, pairs=8, trials=64, seed=7)
    c6, _ = coupling_coefficient(mu, "iwasawa", k=6, pairs=8, trials=64, seed=7)
    assert c1 > c6 > 0.0
    assert se1 > 0.0


# -------------------------------------------------------------- fiber occupation


def test_fiber_all_positive_determinants():
    mu = mixing_measure()
    occ = fiber_occupation(mu, n=1000, seed=8)
    assert occ["plus"] == 1.0
    assert occ["minus"] == 0.0


def test_fiber_mixed_signs_split_evenly():
    mu = AtomicMeasure.from_data(
        weights=[0.5, 0.5],
        atoms=[[[2.0, 1.0], [1.0, 1.0]], [[1.0, 1.0], [2.0, 1.0]]],
    )
    occ = fiber_occupation(mu, n=100000, seed=9)
    assert occ["plus"] == pytest.approx(0.5, abs=0.02)
    assert occ["minus"] == pytest.approx(0.5, abs=0.02)
    assert occ["count_plus"] + occ["count_minus"] == 100000 - occ["burnin"]


def test_fiber_chain_matches_flag_action():
    # the det-sign chain must agree with the label of the walked flag at
    # every step; reproduce the internal sampling and compare the two routes
    mu = AtomicMeasure.from_data(
        weights=[0.5, 0.5],
        atoms=[[[2.0, 1.0], [1.0, 1.0]], [[1.0, 1.0], [2.0, 1.0]]],
    )
    n, seed = 60, 10
    u = derive_stream(seed).random(n)
    idx = np.searchsorted(mu.cum_weights, u, side="right")
    signs = mu.det_signs()[idx]
    chain = np.cumprod(signs)
    eta = identity_flag(2)
    for k in range(n):
        eta = flag_act(mu.atoms[idx[k]], eta)
        assert eta.fiber == chain[k]


def test_fiber_start_label_flips_everything():
    mu = AtomicMeasure.from_data(weights=[1.0], atoms=[np.diag([2.0, 0.5])])
    occ = fiber_occupation(mu, n=500, seed=11, start_fiber=-1)
    assert occ["minus"] == 1.0
