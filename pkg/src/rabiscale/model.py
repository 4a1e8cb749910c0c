"""Parameters, truncated Fock-space indexing and elementary operators.

Basis ordering is fixed: ``row = 2 * n + s`` with ``s = 0`` for spin up and
``s = 1`` for spin down (eigenbasis of sigma_z). Spin is the fast index, so a
spin-boson product ``S (x) B`` is stored as ``np.kron(B, S)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

UP = 0
DOWN = 1

Frame = Literal["rabi", "jc_rotated"]
FRAMES = ("rabi", "jc_rotated")

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# raising operator |up><down|
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
SIGMA_MINUS = SIGMA_PLUS.T.copy()
IDENTITY_2 = np.eye(2)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the biased spin-boson Hamiltonian.

    Parameters
    ----------
    delta : float
        Tunneling strength. May be negative.
    epsilon : float
        Local bias field.
    omega : float
        Boson frequency, strictly positive.
    lam : float
        Spin-boson coupling, non-negative.
    """

    delta: float
    epsilon: float
    omega: float
    lam: float

    def __post_init__(self):
        for name in ("delta", "epsilon", "omega", "lam"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega!r}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")

    @property
    def q(self) -> float:
        """Displacement lambda / omega."""
        return self.lam / self.omega

    @property
    def beta(self) -> float:
        return self.q**2

    @property
    def kappa(self) -> float:
        """Bias-to-tunneling ratio epsilon / delta."""
        if self.delta == 0:
            raise ValueError("kappa = epsilon/delta is undefined for delta = 0")
        return self.epsilon / self.delta

    def replace(self, **changes) -> "ModelParams":
        values = {"delta": self.delta, "epsilon": self.epsilon,
                  "omega": self.omega, "lam": self.lam}
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class FockTruncation:
    """Highest retained Fock index and the policy that produced it."""

    n_max: int
    policy: Literal["fixed", "adaptive"] = "fixed"
    tolerance: float | None = None
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        if self.policy not in ("fixed", "adaptive"):
            raise ValueError(f"unknown truncation policy {self.policy!r}")

    @property
    def n_levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


def as_truncation(trunc) -> FockTruncation:
    if isinstance(trunc, FockTruncation):
        return trunc
    return FockTruncation(int(trunc))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense real symmetric matrix over the truncated spin (x) Fock space."""

    entries: np.ndarray
    frame: Frame = "rabi"
    hermitian: bool = True

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"operator must be square, got shape {entries.shape}")
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.hermitian and not np.array_equal(entries, entries.T):
            raise ValueError("entries are not exactly symmetric")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim // 2 - 1

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.entries))

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return self.entries @ other.entries
        return self.entries @ other


def index(spin: int, n: int, n_max: int | None = None) -> int:
    """Row of basis state ``(spin, n)``."""
    if spin not in (UP, DOWN):
        raise ValueError(f"spin must be UP (0) or DOWN (1), got {spin!r}")
    if n < 0 or (n_max is not None and n > n_max):
        raise IndexError(f"Fock index {n} outside 0..{n_max}")
    return 2 * n + spin


def unindex(row: int, n_max: int | None = None) -> tuple[int, int]:
    """Inverse of :func:`index`: returns ``(spin, n)``."""
    if row < 0 or (n_max is not None and row >= 2 * (n_max + 1)):
        raise IndexError(f"row {row} outside basis of n_max={n_max}")
    n, spin = divmod(row, 2)
    return spin, n


def basis_state(spin: int, n: int, trunc) -> np.ndarray:
    trunc = as_truncation(trunc)
    v = np.zeros(trunc.dim)
    v[index(spin, n, trunc.n_max)] = 1.0
    return v


@dataclass(frozen=True)
class BosonOps:
    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray
    parity_phase: np.ndarray


def build_boson_ops(trunc) -> BosonOps:
    """Fock-sector operators a, a^dagger, a^dagger a and exp(i pi a^dagger a)."""
    levels = as_truncation(trunc).n_levels
    n = np.arange(levels, dtype=np.float64)
    a = np.diag(np.sqrt(n[1:]), k=1)
    n_op = np.diag(n)
    parity_phase = np.diag(np.where(np.arange(levels) % 2 == 0, 1.0, -1.0))
    return BosonOps(a=a, a_dag=a.T.copy(), n_op=n_op, parity_phase=parity_phase)


def tensor_spin_boson(spin_op, boson_op, frame: Frame = "rabi",
                      hermitian: bool | None = None) -> OperatorMatrix:
    """Spin (x) boson product in the interleaved basis ordering."""
    spin_op = np.asarray(spin_op, dtype=np.float64)
    boson_op = np.asarray(boson_op, dtype=np.float64)
    if spin_op.shape != (2, 2):
        raise ValueError(f"spin operator must be 2x2, got {spin_op.shape}")
    if boson_op.ndim != 2 or boson_op.shape[0] != boson_op.shape[1]:
        raise ValueError(f"boson operator must be square, got {boson_op.shape}")
    entries = np.kron(boson_op, spin_op)
    if hermitian is None:
        hermitian = bool(np.array_equal(entries, entries.T))
    return OperatorMatrix(entries, frame=frame, hermitian=hermitian)


def spin_boson_kron(spin_op, boson_op) -> np.ndarray:
    """Raw ndarray version of :func:`tensor_spin_boson` (no symmetry check)."""
    return np.kron(np.asarray(boson_op, dtype=np.float64),
                   np.asarray(spin_op, dtype=np.float64))
