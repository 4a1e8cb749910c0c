"""Parameter maps from the circuit-QED, NV-centre and trapped-ion platforms.

Each platform Hamiltonian is unitarily equivalent to the biased Rabi form
``-(delta/2) sx + (epsilon/2) sz + omega n + lam (a + a^dagger) sz``:

* circuit QED: ``H_eff = (O2/2) sz + ((O1-O3)/2) sx + (wb-w1) n + (G/2)(b+b^dagger) sx``.
  Swapping x and z (Hadamard) and then conjugating with ``sz`` gives
  ``delta = O2``, ``epsilon = O1 - O3``, ``omega = wb - w1``, ``lam = G/2``.
* NV centre: ``H_nv = (O'/2) sx + (D'/2) sz + wm n + l' (a + a^dagger) sz`` is
  already in that form with ``delta = -O'``.
* trapped ion: ``H_ion = -(O~/2) sx + e~ sz + nu n + g (a + a^dagger) sz`` with
  ``g = nu eta / 2``, so ``epsilon = 2 e~``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import IDENTITY_2, SIGMA_X, SIGMA_Z, ModelParams, build_boson_ops, spin_boson_kron

Regime = Literal["rabi_valid", "jc_valid", "neither"]


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class RegimeThresholds:
    """``rabi_valid``: |delta|/omega <= max_delta_rabi and lam/omega >= min_coupling_rabi.
    ``jc_valid``: lam/omega <= max_coupling_jc."""

    max_delta_rabi: float = 0.05
    min_coupling_rabi: float = 0.5
    max_coupling_jc: float = 0.2


DEFAULT_THRESHOLDS = RegimeThresholds()


def classify_regime(m: ModelParams, thresholds: RegimeThresholds = DEFAULT_THRESHOLDS) -> Regime:
    ratio_delta = abs(m.delta) / m.omega
    ratio_lam = m.lam / m.omega
    if ratio_delta <= thresholds.max_delta_rabi and ratio_lam >= thresholds.min_coupling_rabi:
        return "rabi_valid"
    if ratio_lam <= thresholds.max_coupling_jc:
        return "jc_valid"
    return "neither"


@dataclass(frozen=True)
class CircuitQedParams:
    omega_q: float
    omega_b: float
    omega_1: float
    omega_2: float
    Omega_1: float
    Omega_2: float
    Omega_3: float
    G: float
    frame_rtol: float = 1e-9

    def __post_init__(self):
        for name in ("omega_q", "omega_b", "omega_1", "omega_2"):
            if not getattr(self, name) > 0:
                raise MappingError(f"{name} must be > 0")
        target = 0.5 * (self.omega_1 - self.omega_2)
        if not math.isclose(self.Omega_3, target, rel_tol=self.frame_rtol, abs_tol=0.0):
            raise MappingError(
                f"Omega_3={self.Omega_3!r} violates Omega_3 = (omega_1 - omega_2)/2 = {target!r}")


@dataclass(frozen=True)
class NvParams:
    Omega_prime: float
    Delta_prime: float
    omega_m: float
    lambda_prime: float

    def __post_init__(self):
        if not self.omega_m > 0:
            raise MappingError("omega_m must be > 0")


@dataclass(frozen=True)
class IonParams:
    Omega_tilde: float
    epsilon_tilde: float
    nu_tilde: float
    eta: float

    def __post_init__(self):
        if not self.nu_tilde > 0:
            raise MappingError("nu_tilde must be > 0")
        if self.eta < 0:
            raise MappingError("eta must be >= 0")

    @property
    def g_tilde(self) -> float:
        return self.nu_tilde * self.eta / 2.0


def map_circuit_qed(p: CircuitQedParams, thresholds=DEFAULT_THRESHOLDS):
    omega = p.omega_b - p.omega_1
    if omega <= 0:
        raise MappingError(f"effective boson frequency omega_b - omega_1 = {omega!r} must be > 0")
    params = ModelParams(delta=p.Omega_2, epsilon=p.Omega_1 - p.Omega_3,
                         omega=omega, lam=0.5 * p.G)
    return params, classify_regime(params, thresholds)


def map_nv(p: NvParams, thresholds=DEFAULT_THRESHOLDS):
    params = ModelParams(delta=-p.Omega_prime, epsilon=p.Delta_prime,
                         omega=p.omega_m, lam=p.lambda_prime)
    return params, classify_regime(params, thresholds)


def map_ion(p: IonParams, thresholds=DEFAULT_THRESHOLDS):
    params = ModelParams(delta=p.Omega_tilde, epsilon=2.0 * p.epsilon_tilde,
                         omega=p.nu_tilde, lam=p.g_tilde)
    return params, classify_regime(params, thresholds)


def _platform(sx: float, sz: float, omega: float, coupling: float, coupling_spin, n_max: int):
    ops = build_boson_ops(n_max)
    eye = np.eye(n_max + 1)
    H = (sx * spin_boson_kron(SIGMA_X, eye) + sz * spin_boson_kron(SIGMA_Z, eye)
         + omega * spin_boson_kron(IDENTITY_2, ops.n_op)
         + coupling * spin_boson_kron(coupling_spin, ops.a + ops.a_dag))
    return 0.5 * (H + H.T)


def circuit_qed_hamiltonian(p: CircuitQedParams, n_max: int) -> np.ndarray:
    """The effective driven circuit-QED Hamiltonian in its own spin frame."""
    return _platform(0.5 * (p.Omega_1 - p.Omega_3), 0.5 * p.Omega_2,
                     p.omega_b - p.omega_1, 0.5 * p.G, SIGMA_X, n_max)


def nv_hamiltonian(p: NvParams, n_max: int) -> np.ndarray:
    return _platform(0.5 * p.Omega_prime, 0.5 * p.Delta_prime, p.omega_m,
                     p.lambda_prime, SIGMA_Z, n_max)


def ion_hamiltonian(p: IonParams, n_max: int) -> np.ndarray:
    return _platform(-0.5 * p.Omega_tilde, p.epsilon_tilde, p.nu_tilde,
                     p.g_tilde, SIGMA_Z, n_max)


SYSTEMS = {
    "circuit-qed": (CircuitQedParams, map_circuit_qed, circuit_qed_hamiltonian),
    "nv": (NvParams, map_nv, nv_hamiltonian),
    "ion": (IonParams, map_ion, ion_hamiltonian),
}


def reference_circuit_qed(G: float, epsilon: float = 0.0) -> CircuitQedParams:
    """Circuit-QED point with omega_b - omega_1 = 2pi 20 MHz and Omega_2 = 2pi 0.4 MHz (rad/s)."""
    two_pi = 2.0 * math.pi
    omega_1, omega_2 = two_pi * 6e9, two_pi * 4e9
    Omega_3 = 0.5 * (omega_1 - omega_2)
    return CircuitQedParams(omega_q=two_pi * 6.02e9, omega_b=two_pi * 6.02e9,
                            omega_1=omega_1, omega_2=omega_2,
                            Omega_1=Omega_3 + epsilon, Omega_2=two_pi * 0.4e6,
                            Omega_3=Omega_3, G=G)
