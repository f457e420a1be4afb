import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kaclab import FrequencyFrame, dvk_threshold_check, gram_det, image_norm_sq, lattice_dist
from kaclab.errors import DomainError
from kaclab.gram import default_L, gram_matrix, verify_table


def test_det_examples():
    assert gram_det(4, 1) == 4.0
    assert np.array_equal(gram_matrix(4, 1), [[2, 0], [0, 2]])
    assert gram_det(6, 3) == 0.0
    assert gram_det(1024, 7) == pytest.approx(1024**2 / 4, rel=1e-12)


def test_image_norm_examples():
    assert image_norm_sq(4, 1, 0.0, (1, 0)) == 2.0
    assert np.array_equal(FrequencyFrame(4, 1).image((1, 0)), [1, 0, -1, 0])
    assert image_norm_sq(64, 5, 0.0, (0, 0)) == 0



def closed_form_image_norm(n, k, eta, theta):
    """||theta||^2 n/2 + (||theta||^2/2) Re(e^{-2ia} sum_j e^{4 pi i j x}), x = k/n + eta."""
    r2 = theta[0] ** 2 + theta[1] ** 2
    a = math.atan2(theta[1], theta[0])
    x = k / n + eta
    q = np.exp(4j * np.pi * x)
    geo = (1 - q**n) / (1 - q)
    return r2 * n / 2 + r2 / 2 * (np.exp(-2j * a) * geo).real


def test_image_norm_small_frequency_offset():
    # a low frequency k/n + eta leaves an O(n) oscillating term, not O(1)
    value = image_norm_sq(1000, 3, 0.0004, (3, 4))
    assert value == pytest.approx(closed_form_image_norm(1000, 3, 0.0004, (3, 4)), rel=1e-12)
    assert value == pytest.approx(12776.435013919367, rel=1e-12)
    assert abs(value - 12500) > 25


@pytest.mark.parametrize("n,k,eta", [(64, 5, 0.0), (257, 100, 0.001), (2048, 700, 1 / 4096)])
def test_image_norm_closed_form(n, k, eta):
    theta = (1.5, -0.5)
    assert image_norm_sq(n, k, eta, theta) == pytest.approx(
        closed_form_image_norm(n, k, eta, theta), rel=1e-11)


def test_lattice_dist_examples():
    assert lattice_dist(64, 3, (0, 0)) == 0
    assert lattice_dist(4, 1, (0.5, 0)) == pytest.approx(math.sqrt(0.5))


@settings(max_examples=100, deadline=None)
@given(n=st.integers(3, 600), k=st.integers(1, 10**4), a=st.floats(0, 2 * math.pi),
       r=st.floats(0, 50))
def test_lattice_dist_rounding_bound(n, k, a, r):
    assert lattice_dist(n, k % n, (r * math.cos(a), r * math.sin(a))) <= math.sqrt(n) / 2 + 1e-12


@settings(max_examples=100, deadline=None)
@given(n=st.integers(3, 2048), k=st.integers(1, 10**4), frac=st.floats(0, 1),
       x=st.floats(-5, 5), y=st.floats(-5, 5))
def test_image_norm_scales_quadratically(n, k, frac, x, y):
    eta = frac / n
    one = image_norm_sq(n, k % n, eta, (x, y))
    two = image_norm_sq(n, k % n, eta, (2 * x, 2 * y))
    assert two == pytest.approx(4 * one, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("n", [8, 9, 12, 30, 64, 257, 1000, 2048])
def test_exact_identity_all_k(n):
    for k in range(1, n):
        det = gram_det(n, k)
        if 2 * k % n == 0:
            assert abs(det) <= 1e-9 * n * n
        else:
            assert abs(det - n * n / 4) <= 1e-6 * n * n


@pytest.mark.parametrize("n", [8, 16, 64, 100, 257, 512, 1024])
def test_phase_shift_envelope(n):
    # frequencies within 1/16 of 0, 1/2 or 1 degenerate and are left out
    for k in range(1, n):
        for eta in (0, 1 / (4 * n), 1 / (2 * n), 1 / n):
            x = k / n + eta
            if min(abs(x), abs(x - 0.5), abs(x - 1)) <= 1 / 16:
                continue
            assert abs(gram_det(n, k, eta) - n * n / 4) <= 20 * n


def test_phase_shift_can_land_on_half_frequency():
    n = 64
    assert gram_det(n, n // 2 - 1, 1 / n) == pytest.approx(0.0, abs=1e-9)


def test_eta_range_checked():
    with pytest.raises(ValueError):
        FrequencyFrame(16, 1, eta=0.1)


def test_frame_reduction():
    f = FrequencyFrame(96, 36)
    assert (f.gcd, f.n_reduced, f.k_reduced) == (12, 8, 3)


def test_dvk_preconditions():
    with pytest.raises(DomainError):
        dvk_threshold_check(256, 128)
    with pytest.raises(DomainError):
        dvk_threshold_check(256, 0)
    with pytest.raises(ValueError):
        dvk_threshold_check(32, 1)


def test_dvk_report_fields():
    res = dvk_threshold_check(256, 1, samples=500, seed=1)
    assert res.threshold == math.sqrt(8)
    assert res.r_min == 1 / 16 and res.r_max == pytest.approx(256 / (8 * math.pi))
    assert res.column_norm_bound == pytest.approx(0.5)
    assert res.samples == 500 and 0 <= res.violations <= 500


@pytest.mark.parametrize("n,k", [(256, 1), (256, 3), (1024, 5), (1024, 96)])
def test_dvk_no_violations_beyond_quarter_radius(n, k):
    # below r = 1/4 every entry of V_k^T theta rounds to zero, so the distance is
    # ||V_k^T theta|| ~ r sqrt(n/2) and cannot reach sqrt(n/32); above it the
    # lattice distance clears the threshold
    res = dvk_threshold_check(n, k, samples=10**4, seed=0, r_min=0.25)
    assert res.violations == 0


def test_dvk_small_radius_is_plain_norm():
    n, k, r = 256, 1, 0.2
    theta = (r * math.cos(0.3), r * math.sin(0.3))
    assert lattice_dist(n, k, theta) == pytest.approx(math.sqrt(image_norm_sq(n, k, 0.0, theta)))
    assert lattice_dist(n, k, theta) < math.sqrt(n / 32)


def test_default_L():
    assert default_L(0.25) == 8.0
    with pytest.raises(ValueError):
        default_L(0.0)


def test_verify_table_all_pass():
    rows = verify_table((8, 12, 64))
    assert len(rows) == 7 + 11 + 63
    assert all(r[-1] for r in rows)
