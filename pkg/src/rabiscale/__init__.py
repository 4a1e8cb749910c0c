"""Exact and zeroth-order analytic solutions of the biased Rabi and Jaynes-Cummings models."""

__version__ = "0.1.0"

from .model import FockTruncation, ModelParams, OperatorMatrix  # noqa: E402
from .hamiltonians import build_jc, build_parity, build_rabi  # noqa: E402
from .eigensolver import eigh, ground  # noqa: E402
from .displaced import ground_sigma_z  # noqa: E402
from .scaling import beta_c, universal_curve  # noqa: E402
from .estimators import AnalyticInversion, BetaRescaler, GroundStateSolver  # noqa: E402

__all__ = [
    "FockTruncation", "ModelParams", "OperatorMatrix",
    "build_rabi", "build_jc", "build_parity",
    "eigh", "ground", "ground_sigma_z", "beta_c", "universal_curve",
    "GroundStateSolver", "AnalyticInversion", "BetaRescaler",
]
