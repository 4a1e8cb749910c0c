"""scikit-learn style wrappers around the solvers.

The transformers map a column of coupling values (or beta values) to a table
of ground-state observables, so parameter scans compose with ordinary
``Pipeline``/``FunctionTransformer`` tooling::

    >>> solver = GroundStateSolver(model="rabi", delta=0.01, epsilon=1e-4)
    >>> table = solver.fit_transform([[0.5], [1.0], [1.5]])
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import displaced, scaling
from .hamiltonians import MODEL_KINDS
from .model import FockTruncation, ModelParams
from .observables import DegenerateGroundError, observable_set
from .truncation import DEFAULT_TOL, choose_truncation

OBSERVABLES = ("sigma_z", "parity", "gap", "ground_energy", "s_f", "analytic_sigma_z")


def check_model_kind(model: str) -> str:
    if model not in MODEL_KINDS:
        raise ValueError(f"model must be one of {MODEL_KINDS}, got {model!r}")
    return model


def check_observables(observables) -> tuple[str, ...]:
    observables = tuple(observables)
    unknown = [o for o in observables if o not in OBSERVABLES]
    if unknown:
        raise ValueError(f"unknown observables {unknown}; choose from {OBSERVABLES}")
    if not observables:
        raise ValueError("at least one observable is required")
    return observables


def check_n_max(n_max):
    if n_max == "auto":
        return n_max
    if isinstance(n_max, (int, np.integer)) and n_max >= 1:
        return int(n_max)
    raise ValueError(f"n_max must be a positive integer or 'auto', got {n_max!r}")


def check_column(X, name: str = "X") -> np.ndarray:
    """Validate a single-feature 2-D input and return it as a 1-D float array."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"{name} must have exactly one column, got {X.shape[1]}")
    return X[:, 0]


def evaluate_point(model: str, params: ModelParams, trunc, observables) -> tuple[dict, dict]:
    """Observables at one parameter point.

    Returns ``(values, reasons)``; an observable that cannot be evaluated is
    ``None`` in ``values`` with a short code in ``reasons``.
    """
    values: dict = {}
    reasons: dict = {}
    numeric = [o for o in observables if o != "analytic_sigma_z"]
    if numeric:
        want_s_f = "s_f" in numeric
        try:
            obs = observable_set(params, model, trunc, with_s_f=want_s_f)
        except DegenerateGroundError:
            obs = observable_set(params, model, trunc, with_s_f=False)
            reasons["s_f"] = "degenerate_ground"
        for name in numeric:
            values[name] = getattr(obs, name)
    if "analytic_sigma_z" in observables:
        if model != "rabi":
            values["analytic_sigma_z"] = None
            reasons["analytic_sigma_z"] = "not_applicable"
        elif params.delta == 0:
            values["analytic_sigma_z"] = None
            reasons["analytic_sigma_z"] = "kappa_undefined"
        else:
            values["analytic_sigma_z"] = displaced.ground_sigma_z(params.beta, params.kappa)
    return values, reasons


class GroundStateSolver(TransformerMixin, BaseEstimator):
    """Exact-diagonalization observables as a function of the coupling.

    Parameters
    ----------
    model : {"rabi", "jc"}
    delta, epsilon, omega : float
        Fixed model parameters.
    n_max : int or "auto"
        Fock cutoff. ``"auto"`` picks a doubling-converged cutoff at the
        largest coupling seen in ``fit``.
    observables : sequence of str
        Output columns, a subset of :data:`OBSERVABLES`.
    tol : float
        Energy tolerance (units of omega) of the adaptive cutoff.

    Attributes
    ----------
    n_max_ : int
        Cutoff used by :meth:`transform`.
    n_features_in_ : int
    """

    def __init__(self, model="rabi", delta=0.01, epsilon=0.0, omega=1.0, n_max="auto",
                 observables=("sigma_z", "parity", "gap", "ground_energy"), tol=DEFAULT_TOL):
        self.model = model
        self.delta = delta
        self.epsilon = epsilon
        self.omega = omega
        self.n_max = n_max
        self.observables = observables
        self.tol = tol

    def _params(self, lam: float) -> ModelParams:
        return ModelParams(self.delta, self.epsilon, self.omega, lam)

    def fit(self, X, y=None):
        check_model_kind(self.model)
        check_observables(self.observables)
        n_max = check_n_max(self.n_max)
        lam = check_column(X)
        if np.any(lam < 0):
            raise ValueError("couplings must be non-negative")
        self.n_features_in_ = 1
        if n_max == "auto":
            target = "full_spectrum" if "s_f" in self.observables else "ground"
            trunc = choose_truncation(self._params(float(lam.max())), target=target,
                                      tol=self.tol, kind=self.model)
            self.n_max_ = trunc.n_max
        else:
            self.n_max_ = n_max
        return self

    def transform(self, X):
        check_is_fitted(self, "n_max_")
        lam = check_column(X)
        observables = check_observables(self.observables)
        trunc = FockTruncation(self.n_max_)
        out = np.full((lam.shape[0], len(observables)), np.nan)
        for i, value in enumerate(lam):
            values, _ = evaluate_point(self.model, self._params(float(value)), trunc, observables)
            out[i] = [np.nan if values[o] is None else values[o] for o in observables]
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(check_observables(self.observables), dtype=object)


class AnalyticInversion(TransformerMixin, BaseEstimator):
    """Zeroth-order population inversion as a function of beta.

    Stateless; ``fit`` only validates. ``kappa`` is the bias-to-tunneling ratio.
    """

    def __init__(self, kappa=1e-2):
        self.kappa = kappa

    def fit(self, X, y=None):
        check_column(X)
        if not math.isfinite(self.kappa):
            raise ValueError("kappa must be finite")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        beta = check_column(X)
        return np.array([[displaced.ground_sigma_z(b, self.kappa)] for b in beta])

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["analytic_sigma_z"], dtype=object)


class BetaRescaler(TransformerMixin, BaseEstimator):
    """Maps beta to beta' = beta/beta_c or beta'' = (beta - beta_c)/sqrt(27)."""

    def __init__(self, kappa=1e-2, mode="prime"):
        self.kappa = kappa
        self.mode = mode

    def fit(self, X, y=None):
        check_column(X)
        if self.mode not in ("prime", "double_prime"):
            raise ValueError(f"mode must be 'prime' or 'double_prime', got {self.mode!r}")
        self.beta_c_ = scaling.beta_c(self.kappa)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "beta_c_")
        return scaling.rescale(check_column(X), self.kappa, self.mode)[:, None]

    def inverse_transform(self, X):
        check_is_fitted(self, "beta_c_")
        return scaling.unscale(check_column(X), self.kappa, self.mode)[:, None]
