"""Two-term maximal tail bound, Wilson intervals, empirical counters."""

import itertools

import numpy as np
import pytest

from groupwalk.errors import BadExponent, ValidationError
from groupwalk.rng import derive_stream
from groupwalk.tailbounds import (
    calibrate_cp,
    fuk_nagaev_bound,
    maximal_tail_empirical,
    wilson_interval,
)


def test_bound_frozen_example():
    # [DERIVED] direct formula evaluation: gauss term
    # 7 * 2^5.5 * (100/900)^3.5 * exp(-900/800), poly term 100/27000
    b = fuk_nagaev_bound(n=100, x=30.0, sigma2=1.0, p=3.0, c_p=1.0)
    assert b.poly_term == pytest.approx(100.0 / 27000.0, rel=1e-12)
    gauss = 7.0 * 2.0**5.5 * (100.0 / 900.0) ** 3.5 * np.exp(-900.0 / 800.0)
    assert b.gauss_term == pytest.approx(gauss, rel=1e-12)
    assert b.gauss_term == pytest.approx(0.047, abs=5e-4)
    assert b.total == pytest.approx(b.gauss_term + b.poly_term, rel=1e-15)
    assert b.clamped == b.total  # below 1 here


def test_bound_clamps_for_reporting():
    b = fuk_nagaev_bound(n=1000, x=1.0, sigma2=1.0, p=2.5, c_p=10.0)
    assert b.total > 1.0
    assert b.clamped == 1.0


def test_bound_monotone_in_x_beyond_three_sigma_sqrt_n():
    n, sigma2, p, cp = 200, 1.0, 3.0, 0.5
    xs = np.linspace(3.0 * np.sqrt(n), 20.0 * np.sqrt(n), 100)
    vals = [fuk_nagaev_bound(n, x, sigma2, p, cp).total for x in xs]
    assert np.all(np.diff(vals) <= 1e-15)


def test_bound_gauss_term_scale_invariance():
    # replacing (sigma, x) by (a sigma, a x) leaves the gaussian term fixed
    # and divides the polynomial term by a^p
    a = 2.5
    b1 = fuk_nagaev_bound(n=50, x=10.0, sigma2=1.0, p=2.5, c_p=1.0)
    b2 = fuk_nagaev_bound(n=50, x=a * 10.0, sigma2=a * a, p=2.5, c_p=1.0)
    assert b2.gauss_term == pytest.approx(b1.gauss_term, rel=1e-12)
    assert b2.poly_term == pytest.approx(b1.poly_term / a**2.5, rel=1e-12)


def test_bound_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        fuk_nagaev_bound(0, 1.0, 1.0, 3.0, 1.0)
    with pytest.raises(ValidationError):
        fuk_nagaev_bound(10, -1.0, 1.0, 3.0, 1.0)
    with pytest.raises(ValidationError):
        fuk_nagaev_bound(10, 1.0, 0.0, 3.0, 1.0)
    with pytest.raises(BadExponent):
        fuk_nagaev_bound(10, 1.0, 1.0, 2.0, 1.0)
    with pytest.raises(BadExponent):
        fuk_nagaev_bound(10, 1.0, 1.0, 3.5, 1.0)
    with pytest.raises(ValidationError):
        fuk_nagaev_bound(10, 1.0, 1.0, 3.0, -0.1)


def test_wilson_interval_textbook_values():
    # [DERIVED] by direct formula with z = 1.959964: 5/100 successes
    lo, hi = wilson_interval(5, 100)
    assert lo == pytest.approx(0.0215, abs=5e-4)
    assert hi == pytest.approx(0.1118, abs=5e-4)
    lo0, hi0 = wilson_interval(0, 100)
    assert lo0 == 0.0
    assert hi0 == pytest.approx(0.0370, abs=5e-4)
    loN, hiN = wilson_interval(100, 100)
    assert hiN == 1.0
    assert loN == pytest.approx(1.0 - 0.0370, abs=5e-4)


def test_wilson_interval_coverage():
    # frequentist check: the 95% interval should cover the truth ~95% of the
    # time; with 2000 seeded draws the count is deterministic
    stream = derive_stream(400)
    p, n = 0.3, 50
    covered = 0
    for _ in range(2000):
        hits = int(np.sum(stream.random(n) < p))
        lo, hi = wilson_interval(hits, n)
        covered += int(lo <= p <= hi)
    assert covered / 2000 > 0.93


def test_maximal_tail_rademacher_exact():
    # all 16 sign paths of length 4, each once: only the all-plus path has
    # running maximum 4
    paths = np.array(list(itertools.product([-1.0, 1.0], repeat=4)))
    out = maximal_tail_empirical(paths, 4.0)
    assert out["estimate"] == 1.0 / 16.0
    assert out["hits"] == 1
    # threshold beyond reach is impossible
    assert maximal_tail_empirical(paths, 4.5)["estimate"] == 0.0
    # running max >= 1 whenever any prefix reaches 1: 8 paths start with +1,
    # plus those recovering later: count directly
    running = np.max(np.cumsum(paths, axis=1), axis=1)
    assert maximal_tail_empirical(paths, 1.0)["estimate"] == np.mean(running >= 1.0)
    # x <= 0 is allowed and counts signed maxima correctly
    assert maximal_tail_empirical(paths, 0.0)["estimate"] == np.mean(running >= 0.0)


def test_calibrate_then_bound_holds_at_anchor():
    n, sigma2, p = 64, 1.0, 3.0
    stream = derive_stream(401)
    paths = stream.choice([-1.0, 1.0], size=(4000, n))
    x0 = 2.0 * np.sqrt(n)
    emp = maximal_tail_empirical(paths, x0)
    cp = calibrate_cp(n, sigma2, p, x0, emp["wilson_hi"])
    assert cp >= 0.0
    b = fuk_nagaev_bound(n, x0, sigma2, p, cp)
    assert b.total >= emp["wilson_hi"] - 1e-12


def test_calibrate_zero_when_gauss_term_suffices():
    # huge anchor threshold: the gaussian term alone dwarfs any empirical tail
    cp = calibrate_cp(16, 1.0, 3.0, 1.0, 0.0)
    assert cp == 0.0


def test_wilson_rejects_bad_counts():
    with pytest.raises(ValidationError):
        wilson_interval(5, 0)
    with pytest.raises(ValidationError):
        wilson_interval(7, 5)
