import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rabiscale import eigensolver
from rabiscale.hamiltonians import build_jc, build_rabi
from rabiscale.model import ModelParams
from rabiscale.truncation import TruncationError, choose_truncation, initial_n_max


def ground_energy(p, n_max):
    return eigensolver.ground(build_rabi(p, n_max)).energy


def tail_mass(p, n_max):
    v = eigensolver.ground(build_rabi(p, n_max)).vector
    return float(np.sum(v[-4:] ** 2))


def test_start_guess():
    assert initial_n_max(ModelParams(0.1, 0, 1, 0.0)) == 32
    assert initial_n_max(ModelParams(0.1, 0, 1, 2.6)) == math.ceil(4 * (2.6**2 + 3 * 2.6) + 20)


def test_decoupled_small_cutoff():
    p = ModelParams(0.1, 0.0, 1.0, 0.0)
    t = choose_truncation(p)
    assert t.n_max <= 32
    assert ground_energy(p, t.n_max) == pytest.approx(-0.05, abs=1e-15)


def test_critical_regime_doubling_property():
    p = ModelParams(0.01, 1e-8, 1.0, 2.6)
    t = choose_truncation(p)
    assert t.policy == "adaptive"
    assert t.n_max >= 79
    assert abs(ground_energy(p, 2 * t.n_max) - ground_energy(p, t.n_max)) < 1e-10
    assert tail_mass(p, t.n_max) < 1e-12


def test_large_truncation_reference():
    p = ModelParams(0.01, 0.0, 1.0, 0.3)
    t = choose_truncation(p)
    assert abs(ground_energy(p, t.n_max) - ground_energy(p, 512)) < 1e-10


def test_full_spectrum_target_tracks_six_levels():
    p = ModelParams(0.1, 0.001, 1.0, 1.5)
    t = choose_truncation(p, target="full_spectrum")
    a = eigensolver.eigh(build_rabi(p, t.n_max)).values[:6]
    b = eigensolver.eigh(build_rabi(p, 2 * t.n_max)).values[:6]
    assert np.max(np.abs(a - b)) < 1e-10


def test_jc_kind():
    p = ModelParams(0.1, 0.0, 1.0, 0.5)
    t = choose_truncation(p, kind="jc")
    a = eigensolver.ground(build_jc(p, t.n_max)).energy
    assert a == pytest.approx(eigensolver.ground(build_jc(p, 200)).energy, abs=1e-10)


def test_cap_is_explicit_failure():
    with pytest.raises(TruncationError):
        choose_truncation(ModelParams(0.01, 0.0, 1.0, 3.0), cap=60)


def test_bad_target():
    with pytest.raises(ValueError):
        choose_truncation(ModelParams(0.01, 0, 1, 0.5), target="everything")


@given(st.floats(0.0, 2.0), st.floats(0.001, 0.3))
@settings(max_examples=15, deadline=None)
def test_reported_cutoff_satisfies_criterion(q, delta):
    p = ModelParams(delta, 0.1 * delta, 1.0, q)
    t = choose_truncation(p)
    assert t.info["energy_change"] < 1e-10
    assert t.info["tail_mass"] < 1e-12
    assert tail_mass(p, t.n_max) < 1e-12
