"""Matrix group primitives: factorizations, actions, metrics, scaled products."""

import numpy as np
import pytest

from groupwalk.errors import DimMismatch, SingularInput, ValidationError
from groupwalk.matgroup import (
    Flag,
    GroupElement,
    ProjPoint,
    ScaledMatrix,
    flag_act,
    flag_dist,
    flip_last_column,
    identity_flag,
    proj_act,
    proj_dist,
    qr_positive,
    random_flag,
    random_orthogonal,
    random_proj_point,
    svd,
)
from groupwalk.rng import derive_stream


# ---------------------------------------------------------------- qr_positive


def test_qr_permutation_example():
    # [DERIVED] by hand: the swap matrix is orthogonal, so k is the matrix
    # itself and r is the identity (diagonal already positive)
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    f = qr_positive(a)
    assert np.allclose(f.k, a, atol=1e-14)
    assert np.allclose(f.r, np.eye(2), atol=1e-14)


def test_qr_reconstruction_and_structure_random():
    for trial in range(25):
        stream = derive_stream(100, trial)
        d = int(stream.integers(1, 7))
        a = stream.standard_normal((d, d))
        f = qr_positive(a)
        assert np.allclose(f.k @ f.r, a, atol=1e-10 * max(1.0, np.linalg.norm(a)))
        assert np.allclose(f.k.T @ f.k, np.eye(d), atol=1e-12)
        assert np.allclose(f.r, np.triu(f.r), atol=0.0)
        assert np.all(np.diag(f.r) > 0.0)


def test_qr_matches_numpy_oracle_up_to_sign():
    # oracle: numpy.linalg.qr with the sign convention folded in
    stream = derive_stream(101)
    a = stream.standard_normal((5, 5))
    f = qr_positive(a)
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    assert np.allclose(f.k, q * signs, atol=1e-12)
    assert np.allclose(f.r, signs[:, None] * r, atol=1e-12)


def test_qr_rejects_rank_deficient():
    with pytest.raises(SingularInput):
        qr_positive(np.array([[1.0, 2.0], [2.0, 4.0]]))


# ------------------------------------------------------------------------ svd


def test_svd_antidiagonal_example():
    # [DERIVED] by hand: columns are orthogonal with norms 2 and 1
    a = np.array([[0.0, 2.0], [1.0, 0.0]])
    f = svd(a)
    assert np.allclose(f.s, [2.0, 1.0], atol=1e-14)
    assert np.allclose(f.u @ np.diag(f.s) @ f.v.T, a, atol=1e-13)


def test_svd_matches_numpy_oracle_random():
    for trial in range(25):
        stream = derive_stream(102, trial)
        d = int(stream.integers(1, 7))
        a = stream.standard_normal((d, d))
        f = svd(a)
        oracle = np.linalg.svd(a, compute_uv=False)
        assert np.allclose(f.s, oracle, atol=1e-10 * max(1.0, oracle[0]))
        assert np.allclose(f.u @ np.diag(f.s) @ f.v.T, a, atol=1e-10 * max(1.0, oracle[0]))
        assert np.allclose(f.u.T @ f.u, np.eye(d), atol=1e-11)
        assert np.allclose(f.v.T @ f.v, np.eye(d), atol=1e-11)
        assert np.all(np.diff(f.s) <= 1e-15)


def test_svd_handles_rank_deficiency():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    f = svd(a)
    oracle = np.linalg.svd(a, compute_uv=False)
    assert np.allclose(f.s, oracle, atol=1e-12)
    assert np.allclose(f.u.T @ f.u, np.eye(2), atol=1e-12)


def test_svd_ill_conditioned():
    a = np.diag([1e8, 1.0, 1e-8]) @ random_orthogonal(3, derive_stream(103))
    f = svd(a)
    oracle = np.linalg.svd(a, compute_uv=False)
    assert np.allclose(np.log(f.s), np.log(oracle), atol=1e-9)


# ----------------------------------------------------------- projective space


def test_proj_point_canonical_sign():
    p = ProjPoint(np.array([-3.0, 4.0]))
    q = ProjPoint(np.array([3.0, -4.0]))
    assert np.allclose(p.vec, q.vec)
    assert p.vec[0] > 0.0
    assert np.isclose(np.linalg.norm(p.vec), 1.0)


def test_proj_act_diagonal_example():
    # [DERIVED] by hand: diag(2,1) maps (1,1)/sqrt2 to (2,1)/sqrt5
    g = np.diag([2.0, 1.0])
    x = ProjPoint(np.array([1.0, 1.0]))
    y = proj_act(g, x)
    assert np.allclose(y.vec, np.array([2.0, 1.0]) / np.sqrt(5.0), atol=1e-14)


def test_proj_dist_example_and_axioms():
    # [DERIVED] by hand: sine of 45 degrees
    e1 = ProjPoint(np.array([1.0, 0.0]))
    diag = ProjPoint(np.array([1.0, 1.0]))
    assert proj_dist(e1, diag) == pytest.approx(np.sqrt(0.5), abs=1e-14)
    assert proj_dist(e1, e1) == 0.0
    neg = ProjPoint(np.array([-1.0, 0.0]))
    assert proj_dist(e1, neg) == 0.0  # same line
    stream = derive_stream(104)
    for _ in range(20):
        a = random_proj_point(3, stream)
        b = random_proj_point(3, stream)
        c = random_proj_point(3, stream)
        assert proj_dist(a, b) == pytest.approx(proj_dist(b, a), abs=1e-15)
        assert proj_dist(a, c) <= proj_dist(a, b) + proj_dist(b, c) + 1e-12
        assert 0.0 <= proj_dist(a, b) <= 1.0


def test_orthogonal_action_is_isometry():
    stream = derive_stream(105)
    k = random_orthogonal(4, stream)
    for _ in range(10):
        a = random_proj_point(4, stream)
        b = random_proj_point(4, stream)
        assert proj_dist(proj_act(k, a), proj_act(k, b)) == pytest.approx(
            proj_dist(a, b), abs=1e-12
        )


# ----------------------------------------------------------------------- flags


def test_flag_act_and_fiber_sign():
    stream = derive_stream(106)
    eta = identity_flag(3)
    assert eta.fiber == 1
    g_pos = np.diag([2.0, 1.0, 3.0])
    g_neg = np.diag([-2.0, 1.0, 3.0])
    assert flag_act(g_pos, eta).fiber == 1
    assert flag_act(g_neg, eta).fiber == -1
    # det-sign multiplicativity along an orbit
    eta2 = random_flag(3, stream)
    assert flag_act(g_neg, flag_act(g_neg, eta2)).fiber == eta2.fiber


def test_flag_dist_properties():
    stream = derive_stream(107)
    for _ in range(15):
        a = random_flag(3, stream)
        b = random_flag(3, stream)
        c = random_flag(3, stream)
        assert flag_dist(a, a) == pytest.approx(0.0, abs=1e-12)
        assert flag_dist(a, b) == pytest.approx(flag_dist(b, a), abs=1e-12)
        assert flag_dist(a, c) <= flag_dist(a, b) + flag_dist(b, c) + 1e-10
        assert 0.0 <= flag_dist(a, b) <= 1.0 + 1e-12


def test_flag_dist_ignores_column_signs():
    # representatives differing by column signs describe the same chain of
    # subspaces, so the metric treats them as equal
    stream = derive_stream(108)
    a = random_flag(4, stream)
    flipped = Flag(k=a.k * np.array([1.0, -1.0, 1.0, -1.0]))
    assert flag_dist(a, flipped) == pytest.approx(0.0, abs=1e-12)


def test_flip_last_column_changes_fiber_only():
    stream = derive_stream(109)
    a = random_flag(3, stream)
    b = flip_last_column(a)
    assert b.fiber == -a.fiber
    assert flag_dist(a, b) == pytest.approx(0.0, abs=1e-12)


def test_flag_isometry_under_orthogonal():
    stream = derive_stream(110)
    k = random_orthogonal(3, stream)
    for _ in range(10):
        a = random_flag(3, stream)
        b = random_flag(3, stream)
        assert flag_dist(flag_act(k, a), flag_act(k, b)) == pytest.approx(
            flag_dist(a, b), abs=1e-11
        )


# ------------------------------------------------------------- group elements


def test_group_element_rejects_singular():
    with pytest.raises(SingularInput):
        GroupElement(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ValidationError):
        GroupElement(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(DimMismatch):
        GroupElement(np.array([[1.0, 2.0, 3.0]]))


def test_scaled_matrix_products_track_log_scale():
    # product of many copies of 2*I overflows plain float64 long before the
    # scaled representation loses accuracy
    g = np.eye(2) * 2.0
    acc = ScaledMatrix.from_matrix(np.eye(2))
    for _ in range(5000):
        acc = acc.left_multiply(g)
    assert acc.log_scale == pytest.approx(5000 * np.log(2.0), rel=1e-12)
    assert np.isclose(np.linalg.norm(acc.mat, 2), 1.0, atol=1e-10)


def test_random_orthogonal_is_haar_shaped():
    stream = derive_stream(111)
    k = random_orthogonal(5, stream)
    assert np.allclose(k.T @ k, np.eye(5), atol=1e-12)
    assert np.isclose(abs(np.linalg.det(k)), 1.0, atol=1e-10)
