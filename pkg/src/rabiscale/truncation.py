"""Adaptive choice of the Fock cutoff."""
from __future__ import annotations

import math
from typing import Literal

import numpy as np

from . import eigensolver
from .hamiltonians import build
from .model import FockTruncation, ModelParams

DEFAULT_TOL = 1e-10
DEFAULT_CAP = 4096
TAIL_MASS_TOL = 1e-12
FULL_SPECTRUM_LEVELS = 6


class TruncationError(RuntimeError):
    """No cutoff below the cap passed the convergence test."""


def initial_n_max(params: ModelParams) -> int:
    q = params.q
    return max(32, math.ceil(4.0 * (q * q + 3.0 * q) + 20.0))


def _tail_mass(vectors: np.ndarray) -> float:
    # top two Fock levels are the last four rows
    return float(np.max(np.sum(vectors[-4:, :] ** 2, axis=0)))


def _levels(kind, params, n_max, count):
    H = build(kind, params, n_max)
    values, vectors = eigensolver.lowest(H, count)
    return values, vectors


def choose_truncation(params: ModelParams, target: Literal["ground", "full_spectrum"] = "ground",
                      tol: float = DEFAULT_TOL, kind: str = "rabi",
                      cap: int = DEFAULT_CAP) -> FockTruncation:
    """Smallest doubling-converged cutoff.

    Starting from ``max(32, ceil(4(q^2 + 3q) + 20))`` the cutoff is doubled
    until the tracked energies change by less than ``tol * omega`` on
    doubling and the tracked states carry less than ``1e-12`` probability on
    the top two Fock levels. ``target="ground"`` tracks the ground state,
    ``"full_spectrum"`` the lowest six levels.

    Raises
    ------
    TruncationError
        When the doubled cutoff would exceed ``cap``.
    """
    if target not in ("ground", "full_spectrum"):
        raise ValueError(f"unknown target {target!r}")
    count = 1 if target == "ground" else FULL_SPECTRUM_LEVELS
    n_max = min(initial_n_max(params), cap)
    values, vectors = _levels(kind, params, n_max, count)
    history = []
    while True:
        doubled = 2 * n_max
        if doubled > cap:
            raise TruncationError(
                f"no converged cutoff up to n_max={cap} for {params} (history {history})")
        values2, vectors2 = _levels(kind, params, doubled, count)
        change = float(np.max(np.abs(values2 - values)))
        tail = _tail_mass(vectors)
        history.append((n_max, change, tail))
        if change < tol * params.omega and tail < TAIL_MASS_TOL:
            return FockTruncation(n_max, policy="adaptive", tolerance=tol,
                                  info={"energy_change": change, "tail_mass": tail,
                                        "history": history})
        n_max, values, vectors = doubled, values2, vectors2
