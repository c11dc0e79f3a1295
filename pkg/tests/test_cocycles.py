"""Cocycle evaluators: frozen examples, the cocycle identity, determinant sums."""

import numpy as np
import pytest

from groupwalk.errors import InvalidKind
from groupwalk.cocycles import (
    cartan_projection,
    cocycle_identity_residual,
    fiber,
    iwasawa_cocycle,
    kappa0_estimate,
    norm_cocycle,
    sigma_sup_norm,
)
from groupwalk.matgroup import (
    Flag,
    ProjPoint,
    ScaledMatrix,
    identity_flag,
    random_flag,
    random_proj_point,
)
from groupwalk.measures import AtomicMeasure
from groupwalk.rng import derive_stream


def test_norm_cocycle_examples():
    # [DERIVED] by hand: diag(2,1) expands (1,1)/sqrt2 by sqrt(5/2)
    g = np.diag([2.0, 1.0])
    x = ProjPoint(np.array([1.0, 1.0]))
    assert norm_cocycle(g, x) == pytest.approx(0.5 * np.log(2.5), abs=1e-14)
    e1 = ProjPoint(np.array([1.0, 0.0]))
    assert norm_cocycle(g, e1) == pytest.approx(np.log(2.0), abs=1e-14)


def test_iwasawa_examples():
    # [DERIVED] by hand: upper-triangular g at the standard flag reads the diagonal
    eta = identity_flag(2)
    assert np.allclose(
        iwasawa_cocycle(np.diag([2.0, 3.0]), eta), [np.log(2.0), np.log(3.0)], atol=1e-14
    )
    g = np.array([[1.0, 5.0], [0.0, 4.0]])
    assert np.allclose(iwasawa_cocycle(g, eta), [0.0, np.log(4.0)], atol=1e-14)


def test_iwasawa_first_coordinate_is_norm_cocycle():
    # the first flag coordinate is the log expansion of the first column line
    stream = derive_stream(200)
    for _ in range(10):
        g = stream.standard_normal((3, 3))
        eta = random_flag(3, stream)
        x = ProjPoint(eta.k[:, 0])
        assert iwasawa_cocycle(g, eta)[0] == pytest.approx(norm_cocycle(g, x), abs=1e-10)


def test_iwasawa_sums_to_log_det():
    stream = derive_stream(201)
    for _ in range(20):
        g = stream.standard_normal((4, 4))
        eta = random_flag(4, stream)
        total = float(np.sum(iwasawa_cocycle(g, eta)))
        assert total == pytest.approx(np.log(abs(np.linalg.det(g))), abs=1e-9)


def test_cartan_examples():
    # [DERIVED] by hand
    assert np.allclose(cartan_projection(np.diag([np.e, np.e**3])), [3.0, 1.0], atol=1e-12)
    g = np.array([[0.0, 2.0], [1.0, 0.0]])
    assert np.allclose(cartan_projection(g), [np.log(2.0), 0.0], atol=1e-13)


def test_cartan_with_scaled_matrix():
    sm = ScaledMatrix.from_matrix(np.diag([4.0, 1.0])).left_multiply(np.diag([4.0, 1.0]))
    got = cartan_projection(sm)
    assert np.allclose(got, [np.log(16.0), 0.0], atol=1e-12)


def test_cocycle_identity_norm_and_iwasawa():
    stream = derive_stream(202)
    for _ in range(25):
        g = stream.standard_normal((3, 3))
        h = stream.standard_normal((3, 3))
        x = random_proj_point(3, stream)
        eta = random_flag(3, stream)
        assert cocycle_identity_residual("norm", g, h, x) < 1e-10
        assert cocycle_identity_residual("iwasawa", g, h, eta) < 1e-9


def test_cartan_is_not_a_cocycle():
    with pytest.raises(InvalidKind):
        cocycle_identity_residual("cartan", np.eye(2), np.eye(2), None)


def test_fiber_labels():
    eta = identity_flag(3)
    assert fiber(eta) == 1
    flipped = Flag(k=eta.k * np.array([1.0, 1.0, -1.0]))
    assert fiber(flipped) == -1


def test_sigma_sup_norm_exact():
    # [DERIVED] by hand: extremes of |log expansion| over directions
    assert sigma_sup_norm(np.diag([2.0, 0.5])) == pytest.approx(np.log(2.0), abs=1e-12)
    assert sigma_sup_norm(np.diag([4.0, 2.0])) == pytest.approx(np.log(4.0), abs=1e-12)


def test_kappa0_rotation_is_zero():
    # orthogonal steps neither stretch nor contract: kappa0 vanishes
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    mu = AtomicMeasure.from_data(weights=[1.0], atoms=[rot])
    val = kappa0_estimate(mu, "norm", p=3.0, x_trials=64, seed=0)
    assert val == pytest.approx(0.0, abs=1e-9)


def test_kappa0_monotone_in_trials_and_positive():
    mu = AtomicMeasure.from_data(
        weights=[0.5, 0.5],
        atoms=[np.diag([2.0, 0.5]), [[1.0, 1.0], [0.0, 1.0]]],
    )
    lo = kappa0_estimate(mu, "norm", p=3.0, x_trials=32, seed=5)
    hi = kappa0_estimate(mu, "norm", p=3.0, x_trials=256, seed=5)
    assert 0.0 < lo <= hi
    # diag atom contributes exactly 0.5 * log(2)^3 through its sup part;
    # sampled Lipschitz part can only raise the total
    assert hi >= 0.5 * np.log(2.0) ** 3 - 1e-12


def test_kappa0_iwasawa_kind_runs():
    mu = AtomicMeasure.from_data(weights=[1.0], atoms=[np.diag([2.0, 0.5])])
    val = kappa0_estimate(mu, "iwasawa", p=2.5, x_trials=32, seed=1)
    assert val > 0.0
    with pytest.raises(InvalidKind):
        kappa0_estimate(mu, "cartan", p=3.0)
