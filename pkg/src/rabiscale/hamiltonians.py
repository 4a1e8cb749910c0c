"""Biased Rabi and rotated-frame Jaynes-Cummings Hamiltonians, parity operators.

The JC Hamiltonian is written directly in the frame where the spin-boson
coupling is transverse::

    H_jc = (delta/2) sz + (epsilon/2) sx + omega n + lam (s+ a + s- a^dagger)

In this frame the population inversion of the Rabi frame maps to ``sx`` and
the parity operator to ``-sz exp(i pi n)``.
"""
from __future__ import annotations

from typing import Literal

import numpy as np

from . import displaced
from .model import (
    IDENTITY_2, SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z,
    ModelParams, OperatorMatrix, as_truncation, build_boson_ops, spin_boson_kron,
)

ModelKind = Literal["rabi", "jc"]
MODEL_KINDS = ("rabi", "jc")
FRAME_OF_KIND = {"rabi": "rabi", "jc": "jc_rotated"}


def _symmetrize(entries: np.ndarray) -> np.ndarray:
    # kron sums are symmetric up to summation order; make it exact
    return 0.5 * (entries + entries.T)


def rabi_interaction(trunc) -> OperatorMatrix:
    """sz (x) (a + a^dagger), the coupling coefficient of the Rabi model."""
    ops = build_boson_ops(trunc)
    return OperatorMatrix(spin_boson_kron(SIGMA_Z, ops.a + ops.a_dag), frame="rabi")


def jc_interaction(trunc) -> OperatorMatrix:
    """s+ (x) a + s- (x) a^dagger in the rotated frame."""
    ops = build_boson_ops(trunc)
    entries = spin_boson_kron(SIGMA_PLUS, ops.a) + spin_boson_kron(SIGMA_MINUS, ops.a_dag)
    return OperatorMatrix(entries, frame="jc_rotated")


def interaction(kind: ModelKind, trunc) -> OperatorMatrix:
    """dH/dlambda for the given model."""
    if kind == "rabi":
        return rabi_interaction(trunc)
    if kind == "jc":
        return jc_interaction(trunc)
    raise ValueError(f"unknown model kind {kind!r}")


def _rabi_bare(params: ModelParams, trunc) -> np.ndarray:
    ops = build_boson_ops(trunc)
    eye = np.eye(ops.n_op.shape[0])
    return (-0.5 * params.delta * spin_boson_kron(SIGMA_X, eye)
            + 0.5 * params.epsilon * spin_boson_kron(SIGMA_Z, eye)
            + params.omega * spin_boson_kron(IDENTITY_2, ops.n_op))


def _jc_bare(params: ModelParams, trunc) -> np.ndarray:
    ops = build_boson_ops(trunc)
    eye = np.eye(ops.n_op.shape[0])
    return (0.5 * params.delta * spin_boson_kron(SIGMA_Z, eye)
            + 0.5 * params.epsilon * spin_boson_kron(SIGMA_X, eye)
            + params.omega * spin_boson_kron(IDENTITY_2, ops.n_op))


def build_rabi(params: ModelParams, trunc) -> OperatorMatrix:
    """-(delta/2) sx + (epsilon/2) sz + omega n + lam (a + a^dagger) sz."""
    trunc = as_truncation(trunc)
    entries = _rabi_bare(params, trunc) + params.lam * rabi_interaction(trunc).entries
    return OperatorMatrix(_symmetrize(entries), frame="rabi")


def build_jc(params: ModelParams, trunc) -> OperatorMatrix:
    trunc = as_truncation(trunc)
    entries = _jc_bare(params, trunc) + params.lam * jc_interaction(trunc).entries
    return OperatorMatrix(_symmetrize(entries), frame="jc_rotated")


def build(kind: ModelKind, params: ModelParams, trunc) -> OperatorMatrix:
    if kind == "rabi":
        return build_rabi(params, trunc)
    if kind == "jc":
        return build_jc(params, trunc)
    raise ValueError(f"unknown model kind {kind!r}")


def build_parity(trunc, frame="rabi") -> OperatorMatrix:
    """sx exp(i pi n) in the Rabi frame, -sz exp(i pi n) in the JC frame."""
    phase = build_boson_ops(trunc).parity_phase
    if frame == "rabi":
        return OperatorMatrix(spin_boson_kron(SIGMA_X, phase), frame="rabi")
    if frame == "jc_rotated":
        return OperatorMatrix(spin_boson_kron(-SIGMA_Z, phase), frame="jc_rotated")
    raise ValueError(f"unknown frame {frame!r}")


def excitation_number(trunc) -> OperatorMatrix:
    """n + (sz + 1)/2, conserved by the unbiased JC Hamiltonian."""
    ops = build_boson_ops(trunc)
    eye = np.eye(ops.n_op.shape[0])
    entries = spin_boson_kron(IDENTITY_2, ops.n_op) + 0.5 * (
        spin_boson_kron(SIGMA_Z, eye) + spin_boson_kron(IDENTITY_2, eye))
    return OperatorMatrix(entries, frame="jc_rotated")


def build_displaced_matrix(params: ModelParams, trunc) -> OperatorMatrix:
    """Rabi Hamiltonian in the displaced-oscillator basis.

    Basis order is ``[c_0 .. c_N, d_0 .. d_N]``: spin up on displaced Fock
    states centred at ``-q`` and spin down on ``(-1)^(n+1)`` times displaced
    Fock states centred at ``+q``. Diagonal blocks are
    ``omega (m - q^2) +/- epsilon/2``; the off-diagonal block is
    ``(delta/2) D``.
    """
    trunc = as_truncation(trunc)
    levels = trunc.n_levels
    q = params.q
    m = np.arange(levels, dtype=np.float64)
    shift = params.omega * (m - q * q)
    overlaps = displaced.overlap_matrix(trunc.n_max, q)
    entries = np.zeros((2 * levels, 2 * levels))
    entries[:levels, :levels] = np.diag(shift + 0.5 * params.epsilon)
    entries[levels:, levels:] = np.diag(shift - 0.5 * params.epsilon)
    entries[:levels, levels:] = 0.5 * params.delta * overlaps
    entries[levels:, :levels] = 0.5 * params.delta * overlaps.T
    return OperatorMatrix(entries, frame="rabi")


def commutator_norm(A: OperatorMatrix, B: OperatorMatrix) -> float:
    """Frobenius norm of ``AB - BA``."""
    if A.frame != B.frame:
        raise ValueError(f"frame mismatch: {A.frame} vs {B.frame}")
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    return float(np.linalg.norm(A.entries @ B.entries - B.entries @ A.entries))
