import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rabiscale.displaced import ground_sigma_z
from rabiscale.scaling import (
    FIXED_POINT, SQRT_27, ScalingFrame, ScalingWarning, analytic_curve, beta_c,
    collapse_deviation, rescale, sigma_z_of_beta_prime, universal_curve, unscale,
)

KAPPAS = (1e-10, 1e-6, 1e-4, 1e-2, 1e-1)
valid_kappa = st.floats(1e-12, 0.7)


def mp_beta_c(kappa):
    with mpmath.workdps(40):
        return float(-mpmath.log(2 * mpmath.mpf(kappa) ** 2) / 4)


def test_beta_c_examples():
    assert beta_c(1e-6) == pytest.approx(6.734469, abs=1e-6)  # 6.7344685
    assert math.sqrt(beta_c(1e-6)) == pytest.approx(2.5951, abs=5e-5)
    assert beta_c(1 / math.sqrt(2)) == pytest.approx(0.0, abs=1e-15)
    assert beta_c(1e-10) == pytest.approx((20 * math.log(10) - math.log(2)) / 4, rel=1e-15)
    assert beta_c(1e-10) == pytest.approx(11.339639, abs=1e-6)
    for kappa in KAPPAS:
        assert beta_c(kappa) == pytest.approx(mp_beta_c(kappa), rel=1e-15)


def test_beta_c_errors_and_warning():
    with pytest.raises(ValueError):
        beta_c(0.0)
    with pytest.warns(ScalingWarning):
        assert beta_c(2.0) < 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        beta_c(0.5)


def test_rescale_examples():
    for kappa in KAPPAS:
        bc = beta_c(kappa)
        assert rescale(bc, kappa, "prime") == 1.0
        assert rescale(bc, kappa, "double_prime") == 0.0
        assert rescale(0.0, kappa, "prime") == 0.0
    assert beta_c(1e-2) == pytest.approx(2.129298, abs=5e-7)
    assert rescale(4.258596, 1e-2, "prime") == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(ValueError):
        rescale(1.0, 1e-2, "triple_prime")


def test_rescale_prime_undefined_at_zero_beta_c():
    kappa = 1 / math.sqrt(2)
    if beta_c(kappa) == 0:
        with pytest.raises(ZeroDivisionError):
            rescale(1.0, kappa, "prime")


@given(st.floats(0.0, 30.0), valid_kappa, st.sampled_from(["prime", "double_prime"]))
@settings(max_examples=100, deadline=None)
def test_unscale_inverts_rescale(beta, kappa, mode):
    assert unscale(rescale(beta, kappa, mode), kappa, mode) == pytest.approx(beta, abs=1e-12)


def test_frame_object():
    frame = ScalingFrame(1e-2, "double_prime")
    assert frame.beta_c == beta_c(1e-2)
    assert frame.rescale(frame.beta_c) == 0.0


def test_fixed_point():
    assert FIXED_POINT == pytest.approx(-1 / math.sqrt(3), abs=1e-16)
    values = [sigma_z_of_beta_prime(1.0, k) for k in KAPPAS + (0.3, 0.7)]
    assert max(values) - min(values) <= 1e-14
    assert all(abs(v + 1 / math.sqrt(3)) <= 1e-12 for v in values)


def test_sigma_z_of_beta_prime_at_zero():
    for kappa in KAPPAS:
        assert sigma_z_of_beta_prime(0.0, kappa) == pytest.approx(-kappa / math.sqrt(kappa**2 + 1), rel=1e-14)
    with pytest.raises(ValueError):
        sigma_z_of_beta_prime(1.0, 0.0)


@given(st.floats(0.0, 3.0), valid_kappa)
@settings(max_examples=200, deadline=None)
def test_change_of_variables(beta_prime, kappa):
    beta = beta_prime * beta_c(kappa)
    assert sigma_z_of_beta_prime(beta_prime, kappa) == pytest.approx(ground_sigma_z(beta, kappa), abs=1e-14)


def test_universal_curve_examples():
    assert universal_curve(0.0) == pytest.approx(-1 / math.sqrt(3), abs=1e-16)
    assert universal_curve(10.0) == pytest.approx(-1.0, abs=1e-15)
    assert -1e-12 < universal_curve(-5.0) < 0
    assert universal_curve(-1e4) == 0.0 or universal_curve(-1e4) < 0
    np.testing.assert_allclose(universal_curve(np.array([0.0, 0.0])), [FIXED_POINT] * 2)


@pytest.mark.parametrize("kappa", [1e-10, 1e-6, 1e-2, 0.1, 0.5])
def test_exact_collapse_identity(kappa):
    grid = np.linspace(0.0, 30.0, 3001)
    for beta in grid:
        x = (beta - beta_c(kappa)) / SQRT_27
        assert ground_sigma_z(beta, kappa) == pytest.approx(universal_curve(x), abs=1e-12)


def test_collapse_deviation_examples():
    # beta'' >= -beta_c(1e-2)/sqrt(27) keeps beta >= 0 for every kappa in the set
    grid = np.linspace(-0.4, 1.0, 401)
    curves = [(grid, analytic_curve(grid, k)) for k in (1e-6, 1e-4, 1e-2)]
    report = collapse_deviation(curves)
    assert report.pairwise < 1e-12
    assert report.from_universal < 1e-12
    physical = grid[grid >= -beta_c(0.1) / SQRT_27]
    single = collapse_deviation([(physical, analytic_curve(physical, 0.1))])
    assert single.from_universal < 1e-12
    with pytest.raises(ValueError):
        collapse_deviation([(grid, curves[0][1]), (grid[:-1], curves[1][1][:-1])])


@pytest.mark.parametrize("kappa", [1e-6, 1e-2, 0.1])
def test_reflection_point(kappa):
    h = 1e-4
    bc = beta_c(kappa)

    def second(beta):
        return (ground_sigma_z(beta + h, kappa) - 2 * ground_sigma_z(beta, kappa)
                + ground_sigma_z(beta - h, kappa)) / h**2

    assert second(bc - 1e-3) * second(bc + 1e-3) < 0
    grid = np.linspace(bc - 0.5, bc + 0.5, 2001)
    values = np.array([second(b) for b in grid])
    keep = values != 0
    grid, values = grid[keep], values[keep]
    flips = grid[1:][np.diff(np.sign(values)) != 0]
    assert len(flips) == 1
    assert abs(flips[0] - bc) < 1e-3


def test_negative_kappa_mirrors():
    for bp in (0.3, 1.0, 1.7):
        assert sigma_z_of_beta_prime(bp, -1e-3) == -sigma_z_of_beta_prime(bp, 1e-3)
