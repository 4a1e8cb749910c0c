"""Ground-state observables, level-crossing detection and fidelity susceptibility."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.optimize

from . import eigensolver
from .hamiltonians import FRAME_OF_KIND, build, build_parity, interaction
from .model import SIGMA_X, SIGMA_Z, ModelParams, OperatorMatrix, as_truncation

CROSSING_GAP_TOL = 1e-8
DEGENERATE_GAP_TOL = 1e-10


class DegenerateGroundError(ValueError):
    """The ground state is degenerate, so the requested quantity diverges."""


class NoMinimumError(ValueError):
    """The gap has no interior minimum on the scanned coupling range."""


def _spin_expectation(state: np.ndarray, spin_op: np.ndarray) -> float:
    state = np.asarray(state, dtype=np.float64)
    up, down = state[0::2], state[1::2]
    return float(spin_op[0, 0] * up @ up + spin_op[1, 1] * down @ down
                 + 2.0 * spin_op[0, 1] * up @ down)


def population_inversion(state, frame) -> float:
    """``<sz>`` in the Rabi frame, ``<sx>`` (its rotated image) in the JC frame."""
    if frame == "rabi":
        return _spin_expectation(state, SIGMA_Z)
    if frame == "jc_rotated":
        return _spin_expectation(state, SIGMA_X)
    raise ValueError(f"unknown frame {frame!r}")


def parity_expectation(state, frame) -> float:
    state = np.asarray(state, dtype=np.float64)
    parity = build_parity(state.shape[0] // 2 - 1, frame)
    return float(state @ parity.entries @ state)


def ground_gap(params: ModelParams, kind: str, trunc) -> float:
    """``E_1 - E_0`` from the full spectrum."""
    values = eigensolver.eigh(build(kind, params, trunc)).values
    return float(values[1] - values[0])


@dataclass(frozen=True)
class ObservableSet:
    sigma_z: float
    parity: float
    gap: float
    ground_energy: float
    s_f: float | None = None


def observable_set(params: ModelParams, kind: str, trunc, with_s_f: bool = True) -> ObservableSet:
    """All ground-state observables from a single diagonalization."""
    H = build(kind, params, trunc)
    spectrum = eigensolver.eigh(H)
    frame = FRAME_OF_KIND[kind]
    psi = spectrum.vectors[:, 0]
    s_f = None
    if with_s_f:
        s_f = _s_f_from_spectrum(spectrum, interaction(kind, trunc), H)
    return ObservableSet(
        sigma_z=population_inversion(psi, frame),
        parity=parity_expectation(psi, frame),
        gap=float(spectrum.values[1] - spectrum.values[0]),
        ground_energy=float(spectrum.values[0]),
        s_f=s_f,
    )


@dataclass(frozen=True)
class CrossingResult:
    """Refined gap minimum on a coupling scan.

    ``kind`` is ``"crossing"`` when ``min_gap < 1e-8 * omega`` and
    ``"avoided"`` otherwise. ``parity_before``/``parity_after`` hold the
    ground-state parity on the neighbouring grid points.
    """

    location: float
    min_gap: float
    kind: Literal["crossing", "avoided"]
    parity_before: float | None = None
    parity_after: float | None = None
    candidates: list = field(default_factory=list)


def _gap_at(params: ModelParams, kind: str, trunc, lam: float) -> float:
    return ground_gap(params.replace(lam=lam), kind, trunc)


def find_crossing(params_template: ModelParams, kind: str, lambda_range, grid_points: int = 64,
                  trunc=32, xtol: float = 1e-12) -> CrossingResult:
    """Locate and classify the smallest ground-state gap over a coupling range.

    The gap is scanned on a linear grid; every interior local minimum is
    refined by golden-section search and classified. The candidate with the
    smallest refined gap is returned, with all candidates attached.

    Raises
    ------
    NoMinimumError
        If the scanned gap has no interior local minimum (monotone gap).
    """
    lo, hi = lambda_range
    if not 0 <= lo < hi:
        raise ValueError(f"invalid lambda range {lambda_range!r}")
    if grid_points < 16:
        raise ValueError("need at least 16 grid points")
    trunc = as_truncation(trunc)
    grid = np.linspace(lo, hi, grid_points)
    gaps = np.array([_gap_at(params_template, kind, trunc, lam) for lam in grid])
    interior = [i for i in range(1, grid_points - 1)
                if gaps[i] <= gaps[i - 1] and gaps[i] <= gaps[i + 1]]
    if not interior:
        raise NoMinimumError(f"gap is monotone on [{lo}, {hi}] for {kind}")

    omega = params_template.omega
    frame = FRAME_OF_KIND[kind]
    candidates = []
    for i in interior:
        location = scipy.optimize.golden(
            lambda lam: _gap_at(params_template, kind, trunc, lam),
            brack=(grid[i - 1], grid[i], grid[i + 1]), tol=xtol)
        location = float(np.clip(location, grid[i - 1], grid[i + 1]))
        min_gap = _gap_at(params_template, kind, trunc, location)
        if min_gap < CROSSING_GAP_TOL * omega:
            sides = []
            for lam in (grid[i - 1], grid[i + 1]):
                psi = eigensolver.ground(build(kind, params_template.replace(lam=lam), trunc)).vector
                sides.append(parity_expectation(psi, frame))
            result = CrossingResult(location, min_gap, "crossing", *sides)
        else:
            result = CrossingResult(location, min_gap, "avoided")
        candidates.append(result)
    best = min(candidates, key=lambda c: c.min_gap)
    return CrossingResult(best.location, best.min_gap, best.kind,
                          best.parity_before, best.parity_after, candidates)


def _s_f_from_spectrum(spectrum, H1: OperatorMatrix, H: OperatorMatrix) -> float:
    values, vectors = spectrum.values, spectrum.vectors
    scale = H.norm() or 1.0
    if values[1] - values[0] <= DEGENERATE_GAP_TOL * scale:
        raise DegenerateGroundError(
            f"ground state degenerate (gap {values[1] - values[0]:.3g}); S_F diverges")
    elements = vectors[:, 1:].T @ (H1.entries @ vectors[:, 0])
    return float(np.sum(elements**2 / (values[1:] - values[0]) ** 2))


def fidelity_susceptibility_sum(params: ModelParams, kind: str, trunc) -> float:
    """Spectral-sum fidelity susceptibility with respect to the coupling.

    ``sum_{n>0} |<n|H_1|0>|^2 / (E_n - E_0)^2`` with ``H_1 = dH/dlambda``.
    """
    H = build(kind, params, trunc)
    return _s_f_from_spectrum(eigensolver.eigh(H), interaction(kind, trunc), H)


def fidelity_susceptibility_fd(params: ModelParams, kind: str, trunc, delta_lambda: float) -> float:
    """Finite-difference fidelity susceptibility ``2 (1 - F) / delta^2``.

    ``F`` is the ground-state overlap magnitude between couplings
    ``lam -/+ delta/2``. The Hamiltonian is affine in the coupling, so the
    lower point may sit at negative coupling. ``1 - F`` is evaluated as
    ``||phi_a - phi_b||^2 / 2`` with aligned signs to avoid cancellation.
    """
    if not delta_lambda > 0:
        raise ValueError("delta_lambda must be positive")
    H0 = build(kind, params.replace(lam=0.0), trunc).entries
    H1 = interaction(kind, trunc).entries
    states = []
    for lam in (params.lam - 0.5 * delta_lambda, params.lam + 0.5 * delta_lambda):
        H = H0 + lam * H1
        spectrum = eigensolver.eigh(0.5 * (H + H.T))
        if spectrum.values[1] - spectrum.values[0] <= DEGENERATE_GAP_TOL * np.linalg.norm(H):
            raise DegenerateGroundError(f"degenerate ground state at lam={lam:.6g}")
        states.append(spectrum.vectors[:, 0])
    a, b = states
    if a @ b < 0:
        b = -b
    return float(np.sum((a - b) ** 2) / delta_lambda**2)


def cusp_depth(values) -> float:
    """Depth of a dip below its background.

    The background is the higher of the two end-of-scan values, so the
    bias-induced offset away from the dip is not counted as depth.
    """
    values = np.asarray(values, dtype=np.float64)
    return float(max(values[0], values[-1]) - values.min())


def half_depth_width(grid, values) -> float:
    """Width of the region where the dip is deeper than half its depth."""
    grid = np.asarray(grid, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    depth = -values.min()
    inside = grid[values <= -0.5 * depth]
    return float(inside.max() - inside.min()) if inside.size else 0.0


def lambda_c(params: ModelParams) -> float:
    """JC critical coupling ``sqrt(omega * delta)``."""
    if params.delta <= 0:
        raise ValueError("critical coupling needs delta > 0")
    return math.sqrt(params.omega * params.delta)
