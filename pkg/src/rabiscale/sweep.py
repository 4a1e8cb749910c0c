"""Deterministic parameter sweeps and their CSV/JSON serialization."""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from . import __version__, scaling
from .eigensolver import eigh
from .estimators import OBSERVABLES, check_model_kind, check_n_max, evaluate_point
from .hamiltonians import build
from .model import FockTruncation, ModelParams
from .truncation import DEFAULT_TOL, choose_truncation

THREADS_ENV = "RABISCALE_THREADS"
SWEPT = ("lambda", "beta", "beta_prime", "beta_double_prime", "epsilon")
# "energies" expands to the lowest LEVEL_COUNT eigenvalues
SWEEP_OBSERVABLES = OBSERVABLES + ("energies",)
LEVEL_COUNT = 6


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value is None:
        return 1
    threads = int(value)
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {value!r}")
    return threads


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    points: int
    spacing: Literal["linear", "log"] = "linear"

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("grid needs at least one point")
        if self.points >= 2 and not self.start < self.stop:
            raise ValueError(f"grid start {self.start} must be < stop {self.stop}")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise ValueError("log spacing requires start > 0")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.start)])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep. ``delta/epsilon/omega/lam`` are the fixed values; the
    swept field overrides its counterpart (beta-type sweeps set ``lam``)."""

    model: str = "rabi"
    delta: float = 0.01
    epsilon: float = 0.0
    omega: float = 1.0
    lam: float = 0.0
    swept: str = "lambda"
    grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 11))
    observables: tuple = ("sigma_z",)
    n_max: int | str = "auto"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        check_model_kind(self.model)
        check_n_max(self.n_max)
        if self.swept not in SWEPT:
            raise ValueError(f"swept must be one of {SWEPT}, got {self.swept!r}")
        unknown = [o for o in self.observables if o not in SWEEP_OBSERVABLES]
        if unknown or not self.observables:
            raise ValueError(f"bad observables {list(self.observables)}; choose from {SWEEP_OBSERVABLES}")
        object.__setattr__(self, "observables", tuple(self.observables))
        if self.swept in ("beta_prime", "beta_double_prime"):
            if self.delta == 0 or self.epsilon == 0:
                raise ValueError("beta' / beta'' sweeps need delta != 0 and epsilon != 0")

    @property
    def kappa(self) -> float | None:
        return self.epsilon / self.delta if self.delta != 0 else None

    def params_at(self, value: float) -> ModelParams:
        base = dict(delta=self.delta, epsilon=self.epsilon, omega=self.omega, lam=self.lam)
        if self.swept == "lambda":
            base["lam"] = value
        elif self.swept == "epsilon":
            base["epsilon"] = value
        else:
            if self.swept == "beta":
                beta = value
            else:
                mode = "prime" if self.swept == "beta_prime" else "double_prime"
                beta = scaling.unscale(value, self.epsilon / self.delta, mode)
            if beta < 0:
                raise ValueError(f"beta = {beta:.6g} < 0 at {self.swept} = {value:.6g}")
            base["lam"] = self.omega * math.sqrt(beta)
        return ModelParams(**base)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["observables"] = list(self.observables)
        return out


@dataclass
class SweepResult:
    spec: SweepSpec
    columns: list
    rows: list
    metadata: dict

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if r.get(name) is None else r[name] for r in self.rows], dtype=float)


def _columns(spec: SweepSpec) -> list:
    cols = ["index", spec.swept, "lambda", "beta", "beta_prime", "beta_double_prime",
            "lambda_over_lambda_c"]
    cols = list(dict.fromkeys(cols))
    for name in spec.observables:
        if name == "energies":
            cols += [f"energy_{k}" for k in range(LEVEL_COUNT)]
        else:
            cols.append(name)
    if spec.model == "rabi" and {"sigma_z", "analytic_sigma_z"} <= set(spec.observables):
        cols.append("tolerance")
    cols += ["n_max", "reasons"]
    return cols


def _coordinates(spec: SweepSpec, params: ModelParams) -> dict:
    out = {"lambda": params.lam, "beta": params.beta, "beta_prime": None,
           "beta_double_prime": None, "lambda_over_lambda_c": None}
    if params.delta != 0 and params.epsilon != 0:
        kappa = params.kappa
        bc = -(math.log(2.0) + 2.0 * math.log(abs(kappa))) / 4.0
        if bc != 0:
            out["beta_prime"] = params.beta / bc
        out["beta_double_prime"] = (params.beta - bc) / scaling.SQRT_27
    if spec.model == "jc" and params.delta != 0:
        out["lambda_over_lambda_c"] = params.lam / math.sqrt(params.omega * abs(params.delta))
    return out


def evaluate_row(spec: SweepSpec, index: int, value: float) -> dict:
    """One sweep row; failures are recorded in ``reasons`` rather than raised."""
    row = {"index": index, spec.swept: float(value)}
    reasons = {}
    try:
        params = spec.params_at(float(value))
    except ValueError as exc:
        row["reasons"] = f"params:{type(exc).__name__}"
        return row
    row.update(_coordinates(spec, params))
    row[spec.swept] = float(value)
    try:
        if spec.n_max == "auto":
            target = "full_spectrum" if ({"s_f", "energies"} & set(spec.observables)) else "ground"
            n_max = choose_truncation(params, target=target, tol=spec.tol, kind=spec.model).n_max
        else:
            n_max = int(spec.n_max)
        row["n_max"] = n_max
        trunc = FockTruncation(n_max)
        plain = [o for o in spec.observables if o != "energies"]
        if plain:
            values, why = evaluate_point(spec.model, params, trunc, plain)
            row.update(values)
            reasons.update(why)
        if "energies" in spec.observables:
            levels = eigh(build(spec.model, params, trunc)).values[:LEVEL_COUNT]
            for k, energy in enumerate(levels):
                row[f"energy_{k}"] = float(energy)
        if "tolerance" in _columns(spec):
            row["tolerance"] = abs(params.delta) / params.omega
    except Exception as exc:  # row-level failure never aborts the sweep
        reasons["row"] = f"solver_error:{type(exc).__name__}"
    row["reasons"] = ";".join(f"{k}={v}" for k, v in sorted(reasons.items()))
    return row


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepResult:
    """Evaluate every grid point; output order and values do not depend on ``threads``."""
    threads = default_threads() if threads is None else threads
    grid = spec.grid.values()
    start = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda iv: evaluate_row(spec, *iv), enumerate(grid)))
    else:
        rows = [evaluate_row(spec, i, v) for i, v in enumerate(grid)]
    metadata = {"wall_time_s": time.perf_counter() - start, "threads": threads,
                "version": __version__}
    return SweepResult(spec, _columns(spec), rows, metadata)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else format(float(value), ".17g")
    return str(value)


def format_csv(columns, rows, comments: dict | None = None) -> str:
    """CSV text: ``#`` metadata lines, one header row, 17 significant digits."""
    lines = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in (comments or {}).items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path, extra_comments: dict | None = None) -> Path:
    """Deterministic output: wall time and thread count are kept out of the CSV."""
    comments = {"generator": f"rabiscale {__version__}", "spec": result.spec.to_dict()}
    comments.update(extra_comments or {})
    path = Path(path)
    path.write_text(format_csv(result.columns, result.rows, comments))
    return path


def read_csv(path) -> tuple[list, list]:
    """Parse a CSV written by :func:`write_csv` into ``(columns, rows)``."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = {}
        for name, cell in zip(columns, line.split(",")):
            if cell == "":
                row[name] = None
            elif name == "reasons":
                row[name] = cell
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    row[name] = cell
        rows.append(row)
    return columns, rows
