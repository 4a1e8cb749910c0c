import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rabiscale import eigensolver
from rabiscale.displaced import (
    coherent_state, displaced_fock_state, energies, ground_sigma_z, ground_wavefunction,
    overlap_D, overlap_matrix,
)
from rabiscale.hamiltonians import build_rabi
from rabiscale.model import SIGMA_X, ModelParams, spin_boson_kron
from rabiscale.observables import population_inversion
from rabiscale.scaling import beta_c


def brute_overlap(m, n, q, n_max=120):
    """D_{m,n} from constructed displaced number states; |n>_B carries (-1)^n."""
    a = displaced_fock_state(m, -q, n_max).fock_amplitudes
    b = displaced_fock_state(n, q, n_max).fock_amplitudes
    return (-1) ** n * float(a @ b)


def mp_overlap(m, n, q):
    with mpmath.workdps(60):
        q = mpmath.mpf(q)
        total = mpmath.mpf(0)
        for k in range(min(m, n) + 1):
            total += ((-1) ** k * mpmath.sqrt(mpmath.factorial(m) * mpmath.factorial(n))
                      * (2 * q) ** (m + n - 2 * k)
                      / (mpmath.factorial(m - k) * mpmath.factorial(n - k) * mpmath.factorial(k)))
        return float(mpmath.exp(-2 * q * q) * total)


def test_overlap_examples():
    assert overlap_D(0, 0, 0.5) == pytest.approx(0.606531, abs=5e-7)
    assert overlap_D(0, 0, 0.5) == pytest.approx(brute_overlap(0, 0, 0.5), abs=1e-12)
    for m in range(8):
        assert overlap_D(m, m, 0.0) == (-1) ** m
    assert abs(overlap_D(1, 1, 0.5)) < 1e-15
    assert abs(brute_overlap(1, 1, 0.5)) < 1e-12


@given(st.integers(0, 40), st.integers(0, 40), st.floats(0.0, 3.0))
@settings(max_examples=200, deadline=None)
def test_overlap_symmetric_exactly(m, n, q):
    assert overlap_D(m, n, q) == overlap_D(n, m, q)


@pytest.mark.parametrize("q", [0.0, 0.3, 1.0, 1.7, 2.0])
def test_overlap_matches_constructed_states(q):
    for m in range(11):
        for n in range(11):
            assert overlap_D(m, n, q) == pytest.approx(brute_overlap(m, n, q), abs=1e-8)


@pytest.mark.parametrize("m,n,q", [(5, 7, 1.0), (20, 20, 2.0), (35, 38, 3.0), (40, 3, 2.5)])
def test_overlap_against_high_precision(m, n, q):
    assert overlap_D(m, n, q) == pytest.approx(mp_overlap(m, n, q), abs=1e-13)


@pytest.mark.parametrize("q", [0.0, 0.5, 1.5, 3.0])
def test_overlap_matrix_agrees_with_scalar(q):
    mat = overlap_matrix(30, q)
    np.testing.assert_array_equal(mat, mat.T)
    ref = np.array([[overlap_D(m, n, q) for n in range(31)] for m in range(31)])
    np.testing.assert_allclose(mat, ref, atol=1e-12)


def test_energies_example_and_oracle():
    p = ModelParams(0.1, 0.0, 1.0, 1.0)
    sol = energies(0, p)
    assert sol.e_minus == pytest.approx(-1 - 0.05 * math.exp(-2), abs=1e-12)
    assert sol.e_plus == pytest.approx(-1 + 0.05 * math.exp(-2), abs=1e-12)
    assert 0.05 * math.exp(-2) == pytest.approx(0.0067668, abs=1e-7)
    numeric = eigensolver.eigh(build_rabi(p, 60)).values[:2]
    np.testing.assert_allclose(numeric, [sol.e_minus, sol.e_plus], atol=1e-3)


def test_energies_unbiased_branches_balanced():
    sol = energies(0, ModelParams(0.1, 0.0, 1.0, 0.8))
    assert abs(sol.mu_plus) == pytest.approx(1.0)
    assert abs(sol.mu_minus) == pytest.approx(1.0)
    assert sol.c_minus**2 - sol.d_minus**2 == pytest.approx(0.0, abs=1e-15)
    assert sol.c_plus**2 - sol.d_plus**2 == pytest.approx(0.0, abs=1e-15)


def test_energies_decoupled_limit():
    sol = energies(0, ModelParams(0.3, 0.4, 1.0, 0.0))
    assert sol.e_plus == pytest.approx(0.25)
    assert sol.e_minus == pytest.approx(-0.25)


def test_energies_degenerate_limit_no_division():
    # delta = 0: sectors decouple, the lower branch sits wholly in the -eps/2 sector
    sol = energies(0, ModelParams(0.0, 0.02, 1.0, 0.5))
    assert (sol.c_minus, sol.d_minus, sol.c_plus, sol.d_plus) == (0.0, 1.0, 1.0, 0.0)
    assert (sol.e_minus, sol.e_plus) == pytest.approx((-0.26, -0.24), abs=1e-15)
    sol = energies(0, ModelParams(0.0, -0.02, 1.0, 0.5))
    assert (sol.c_minus, sol.d_minus) == (1.0, 0.0)
    # D_11(0.5) = 0 exactly
    sol = energies(1, ModelParams(0.1, 0.02, 1.0, 0.5))
    assert sol.d_mm == 0.0
    assert (sol.c_minus, sol.d_minus) == (0.0, 1.0)


@given(st.integers(0, 10), st.floats(-0.5, 0.5), st.floats(-0.2, 0.2), st.floats(0.0, 2.0))
@settings(max_examples=100, deadline=None)
def test_energies_invariants(m, delta, epsilon, lam):
    sol = energies(m, ModelParams(delta, epsilon, 1.0, lam))
    assert sol.c_plus**2 + sol.d_plus**2 == pytest.approx(1.0, abs=1e-14)
    assert sol.c_minus**2 + sol.d_minus**2 == pytest.approx(1.0, abs=1e-14)
    assert sol.e_minus <= sol.e_plus
    split = math.hypot(epsilon, delta * sol.d_mm)
    assert sol.e_plus - sol.e_minus == pytest.approx(split, abs=1e-14)


def test_sigma_z_examples():
    for kappa in (1e-10, 1e-6, 1e-2, 0.1, 0.5):
        assert ground_sigma_z(beta_c(kappa), kappa) == pytest.approx(-1 / math.sqrt(3), abs=1e-12)
    assert ground_sigma_z(0.0, 1.0) == pytest.approx(-1 / math.sqrt(2), abs=1e-15)
    # -0.1 / sqrt(0.01 + exp(-8)) = -0.98363741...
    assert ground_sigma_z(2.0, 0.1) == pytest.approx(-0.983638, abs=1e-6)
    assert ground_sigma_z(3.0, 0.0) == 0.0
    assert ground_sigma_z(5.0, -0.1) == -ground_sigma_z(5.0, 0.1)


def test_sigma_z_dense_oracle():
    psi = eigensolver.ground(build_rabi(ModelParams(1e-2, 1e-3, 1.0, math.sqrt(2)), 50)).vector
    assert population_inversion(psi, "rabi") == pytest.approx(ground_sigma_z(2.0, 0.1), abs=1e-2)


def test_sigma_z_extreme_kappa():
    assert ground_sigma_z(1.0, 1e-300) == pytest.approx(-1e-300 * math.exp(2), rel=1e-12)
    assert ground_sigma_z(400.0, 1e-300) == -1.0  # localized once 4 beta > -2 ln kappa
    assert ground_sigma_z(0.0, 1e300) == -1.0
    with pytest.raises(ValueError):
        ground_sigma_z(-0.1, 0.1)


def test_sigma_z_monotone_and_limits():
    beta = np.linspace(0, 20, 2001)
    values = np.array([ground_sigma_z(b, 1e-3) for b in beta])
    assert np.all(np.diff(values) <= 0)
    assert values[0] == pytest.approx(-1e-3 / math.sqrt(1e-6 + 1))
    assert values[-1] == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("kappa", [1e-6, 1e-4, 1e-2, 0.1, 1.0, 10.0])
def test_branch_amplitudes_reproduce_formula(kappa):
    for beta in np.linspace(0, 12, 49):
        p = ModelParams(1.0, kappa, 1.0, math.sqrt(beta))
        sol = energies(0, p)
        assert sol.c_minus**2 - sol.d_minus**2 == pytest.approx(ground_sigma_z(beta, kappa), abs=1e-12)


def test_coherent_state_amplitudes():
    q = 1.3
    v = coherent_state(-q, 60)
    n = np.arange(61)
    expected = np.exp(-q * q / 2) * (-q) ** n / np.sqrt([float(math.factorial(k)) for k in n])
    np.testing.assert_allclose(v, expected, atol=1e-15)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_ground_wavefunction_unbiased_overlap():
    p = ModelParams(0.01, 0.0, 1.0, 1.0)
    psi = eigensolver.ground(build_rabi(p, 60)).vector
    assert abs(ground_wavefunction(p, 60) @ psi) > 0.999


def test_ground_wavefunction_decoupled():
    psi = ground_wavefunction(ModelParams(0.1, 0.0, 1.0, 0.0), 5)
    sx = spin_boson_kron(SIGMA_X, np.eye(6))
    assert psi @ sx @ psi == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(np.abs(psi[:2]), [1 / math.sqrt(2)] * 2, atol=1e-15)
    np.testing.assert_array_equal(psi[2:], 0.0)


def test_ground_wavefunction_internal_consistency():
    p = ModelParams(0.01, 0.1, 1.0, math.sqrt(2.0))
    psi = ground_wavefunction(p, 60)
    assert population_inversion(psi, "rabi") == pytest.approx(ground_sigma_z(2.0, 10.0), abs=1e-12)


def test_ground_wavefunction_rejects_small_truncation():
    with pytest.raises(ValueError):
        ground_wavefunction(ModelParams(0.01, 0.0, 1.0, 3.0), 10)


@pytest.mark.parametrize("q", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_zeroth_order_energy_accuracy(q):
    p = ModelParams(0.01, 1e-4, 1.0, q)
    n_max = max(40, int(4 * (q * q + 3 * q) + 20))
    e0 = eigensolver.ground(build_rabi(p, n_max)).energy
    assert abs(energies(0, p).e_minus - e0) < 1e-2
