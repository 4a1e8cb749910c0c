"""Critical scale, rescaled coordinates and the universal collapse curve."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .displaced import ground_sigma_z

SQRT_27 = math.sqrt(27.0)
COLLAPSE_RATE = 12.0 * math.sqrt(3.0)
FIXED_POINT = -1.0 / math.sqrt(3.0)

Mode = Literal["prime", "double_prime"]


class ScalingWarning(UserWarning):
    pass


def beta_c(kappa: float) -> float:
    """Inflection point ``-ln(2 kappa^2) / 4`` of the population inversion in beta.

    Negative for ``|kappa| > 1/sqrt(2)``; a :class:`ScalingWarning` is issued
    in that case.
    """
    if kappa == 0:
        raise ValueError("beta_c requires kappa != 0")
    if not math.isfinite(kappa):
        raise ValueError(f"kappa must be finite, got {kappa!r}")
    value = -(math.log(2.0) + 2.0 * math.log(abs(kappa))) / 4.0
    if value < 0:
        warnings.warn(f"beta_c({kappa}) = {value:.6g} is negative (|kappa| > 1/sqrt(2))",
                      ScalingWarning, stacklevel=2)
    return value


@dataclass(frozen=True)
class ScalingFrame:
    kappa: float
    mode: Mode = "prime"

    @property
    def beta_c(self) -> float:
        return beta_c(self.kappa)

    def rescale(self, beta):
        return rescale(beta, self.kappa, self.mode)


def rescale(beta, kappa: float, mode: Mode = "prime"):
    """``beta / beta_c`` (prime) or ``(beta - beta_c) / sqrt(27)`` (double_prime)."""
    bc = beta_c(kappa)
    if mode == "prime":
        if bc == 0:
            raise ZeroDivisionError("beta_c = 0; prime rescaling undefined")
        return np.asarray(beta) / bc if np.ndim(beta) else beta / bc
    if mode == "double_prime":
        return (np.asarray(beta) - bc) / SQRT_27 if np.ndim(beta) else (beta - bc) / SQRT_27
    raise ValueError(f"unknown mode {mode!r}")


def unscale(value, kappa: float, mode: Mode = "prime"):
    """Inverse of :func:`rescale`."""
    bc = beta_c(kappa)
    if mode == "prime":
        return value * bc
    if mode == "double_prime":
        return value * SQRT_27 + bc
    raise ValueError(f"unknown mode {mode!r}")


def sigma_z_of_beta_prime(beta_prime: float, kappa: float) -> float:
    """``-kappa / sqrt(kappa^2 + exp(beta' ln(2 kappa^2)))`` in log form."""
    if kappa == 0:
        raise ValueError("requires kappa != 0")
    t = beta_prime * (math.log(2.0) + 2.0 * math.log(abs(kappa))) - 2.0 * math.log(abs(kappa))
    return -math.copysign(math.exp(-0.5 * np.logaddexp(0.0, t)), kappa)


def universal_curve(beta_double_prime):
    """kappa-free collapse curve ``-1 / sqrt(1 + 2 exp(-12 sqrt(3) beta''))``."""
    x = np.asarray(beta_double_prime, dtype=np.float64)
    # log(1 + 2 e^{-r x}) = logaddexp(0, ln 2 - r x)
    out = -np.exp(-0.5 * np.logaddexp(0.0, math.log(2.0) - COLLAPSE_RATE * x))
    return float(out) if out.ndim == 0 else out


def analytic_curve(beta_double_prime, kappa: float) -> np.ndarray:
    """Population inversion on a beta'' grid, via the un-rescaled formula."""
    betas = unscale(np.asarray(beta_double_prime, dtype=np.float64), kappa, "double_prime")
    return np.array([ground_sigma_z(b, kappa) for b in betas])


@dataclass(frozen=True)
class CollapseReport:
    pairwise: float
    from_universal: float

    def __float__(self):
        return max(self.pairwise, self.from_universal)


def collapse_deviation(curves: Sequence[tuple[Sequence[float], Sequence[float]]]) -> CollapseReport:
    """Collapse quality of several ``(beta'', value)`` series on a common grid.

    Returns the maximum pairwise absolute deviation and the maximum deviation
    from :func:`universal_curve`. A single series only gets the latter.
    """
    if not curves:
        raise ValueError("need at least one series")
    grid = np.asarray(curves[0][0], dtype=np.float64)
    series = []
    for x, y in curves:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.shape != grid.shape or not np.array_equal(x, grid) or y.shape != grid.shape:
            raise ValueError("series are not on a common beta'' grid")
        series.append(y)
    pairwise = 0.0
    for a, b in itertools.combinations(series, 2):
        pairwise = max(pairwise, float(np.max(np.abs(a - b))))
    reference = universal_curve(grid)
    from_universal = max(float(np.max(np.abs(y - reference))) for y in series)
    return CollapseReport(pairwise=pairwise, from_universal=from_universal)
