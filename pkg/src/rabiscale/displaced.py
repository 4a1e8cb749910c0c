"""Closed-form solution of the biased Rabi model in the displaced-oscillator basis.

Spin up lives on Fock states displaced to ``-q`` and spin down on Fock states
displaced to ``+q`` (``q = lam / omega``). Keeping only the diagonal overlaps
``D[m, m]`` decouples the problem into 2x2 blocks, which gives the
eigenenergies ``E_m^{+/-}``, amplitudes ``(c_m, d_m)`` and the ground-state
population inversion ``-kappa / sqrt(kappa^2 + exp(-4 beta))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .model import DOWN, UP, ModelParams, as_truncation, build_boson_ops, index

# fall back to multiprecision when the float sum may lose more than this
_CANCELLATION_LIMIT = 1e-14
NORM_DEFICIT_TOL = 1e-8


def _log_terms(m: int, n: int, q: float):
    """Sign and log-magnitude of each summand of D[m, n]."""
    lo = min(m, n)
    base = 0.5 * (math.lgamma(m + 1) + math.lgamma(n + 1)) - 2.0 * q * q
    log_2q = math.log(2.0 * q) if q > 0 else -math.inf
    signs, logs = [], []
    for k in range(lo + 1):
        power = m + n - 2 * k
        if power == 0:
            log_pow = 0.0
        elif q == 0:
            continue
        else:
            log_pow = power * log_2q
        logs.append(base + log_pow - math.lgamma(m - k + 1)
                    - math.lgamma(n - k + 1) - math.lgamma(k + 1))
        # (-1)^(-k) == (-1)^k
        signs.append(-1.0 if k % 2 else 1.0)
    return signs, logs


def _overlap_mp(m: int, n: int, q: float) -> float:
    signs, logs = _log_terms(m, n, q)
    digits = int(max(logs) / math.log(10)) if logs else 0
    with mpmath.workdps(30 + max(digits, 0) + int(2 * q * q / math.log(10))):
        two_q = 2 * mpmath.mpf(q)
        total = mpmath.mpf(0)
        lo = min(m, n)
        for k in range(lo + 1):
            power = m + n - 2 * k
            if q == 0 and power:
                continue
            term = (mpmath.sqrt(mpmath.factorial(m) * mpmath.factorial(n))
                    * two_q**power
                    / (mpmath.factorial(m - k) * mpmath.factorial(n - k) * mpmath.factorial(k)))
            total += -term if k % 2 else term
        return float(total * mpmath.exp(-2 * mpmath.mpf(q) ** 2))


def overlap_D(m: int, n: int, q: float) -> float:
    """Signed overlap ``D[m, n]`` between oppositely displaced Fock states.

    Evaluated from the finite alternating sum in log-magnitude form with
    exactly rounded summation. When the summands are large enough that the
    float sum could cancel catastrophically, the sum is redone in
    multiprecision arithmetic.
    """
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    if q < 0 or not math.isfinite(q):
        raise ValueError(f"q must be finite and >= 0, got {q!r}")
    m, n = (m, n) if m <= n else (n, m)
    signs, logs = _log_terms(m, n, q)
    if not logs:
        return 0.0
    peak = max(logs)
    terms = [s * math.exp(lg) for s, lg in zip(signs, logs)]
    total = math.fsum(terms)
    # each term carries ~2 ulp of rounding; compare with the result
    error = 4 * len(terms) * np.finfo(float).eps * math.exp(peak)
    if error > _CANCELLATION_LIMIT * max(abs(total), math.exp(-2 * q * q)):
        return _overlap_mp(m, n, q)
    return total


def overlap_matrix(n_max: int, q: float) -> np.ndarray:
    """``D[m, n]`` for ``0 <= m, n <= n_max`` as a dense symmetric array.

    Uses ``D[m, n] = (-1)^n <m| exp(2q (a^dagger - a)) |n>`` written through
    associated Laguerre polynomials, with the factorial prefactor in log form.
    """
    if q < 0 or not math.isfinite(q):
        raise ValueError(f"q must be finite and >= 0, got {q!r}")
    levels = n_max + 1
    idx = np.arange(levels)
    if q == 0:
        return np.diag(np.where(idx % 2 == 0, 1.0, -1.0))
    alpha = 2.0 * q
    m, n = np.meshgrid(idx, idx, indexing="ij")
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    log_pref = (0.5 * (gammaln(lo + 1) - gammaln(hi + 1))
                + (hi - lo) * math.log(alpha) - 0.5 * alpha * alpha)
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.exp(log_pref) * eval_genlaguerre(lo, hi - lo, alpha * alpha)
    # <m|D|n> = (-1)^(n-m) <n|D|m>, then D = (-1)^n <m|D|n>; net sign (-1)^min
    D = np.where(lo % 2 == 0, 1.0, -1.0) * values
    D = np.triu(D) + np.triu(D, 1).T
    if not np.all(np.isfinite(D)):
        raise FloatingPointError(f"overlap matrix overflow at n_max={n_max}, q={q}")
    return D


@dataclass(frozen=True)
class DisplacedSolution:
    m: int
    e_plus: float
    e_minus: float
    mu_plus: float
    mu_minus: float
    c_plus: float
    c_minus: float
    d_plus: float
    d_minus: float
    d_mm: float


def _branch(x: float, y: float) -> tuple[float, float, float]:
    """``(mu, c, d)`` for an eigenvector proportional to ``(x, y)`` with ``d >= 0``."""
    r = math.hypot(x, y)
    sign = -1.0 if y < 0 else 1.0
    mu = x / y if y != 0 else math.copysign(math.inf, x * sign)
    return mu, sign * x / r, abs(y) / r


def energies(m: int, params: ModelParams) -> DisplacedSolution:
    """Diagonal-overlap eigenpair of block ``m``.

    When ``delta * D[m, m] == 0`` the block is already diagonal and the
    amplitudes are the limiting ``(1, 0)`` / ``(0, 1)`` pairs.
    """
    q = params.q
    d_mm = overlap_D(m, m, q)
    eps = params.epsilon
    coupling = params.delta * d_mm
    root = math.hypot(eps, coupling)
    shift = params.omega * (m - q * q)
    e_plus, e_minus = shift + 0.5 * root, shift - 0.5 * root

    if coupling == 0.0:
        # the up (c) sector sits at +eps/2
        up_first = eps >= 0
        c_plus, d_plus = (1.0, 0.0) if up_first else (0.0, 1.0)
        c_minus, d_minus = (0.0, 1.0) if up_first else (1.0, 0.0)
        mu_plus = math.inf if up_first else 0.0
        mu_minus = 0.0 if up_first else -math.inf
        return DisplacedSolution(m, e_plus, e_minus, mu_plus, mu_minus,
                                 c_plus, c_minus, d_plus, d_minus, d_mm)

    # eps -/+ root computed without cancellation
    if eps >= 0:
        x_plus = eps + root
        x_minus = -coupling * coupling / x_plus if x_plus else 0.0
    else:
        x_minus = eps - root
        x_plus = -coupling * coupling / x_minus
    mu_plus, c_plus, d_plus = _branch(x_plus, coupling)
    mu_minus, c_minus, d_minus = _branch(x_minus, coupling)
    return DisplacedSolution(m, e_plus, e_minus, mu_plus, mu_minus,
                             c_plus, c_minus, d_plus, d_minus, d_mm)


def ground_sigma_z(beta: float, kappa: float) -> float:
    """Zeroth-order ground-state population inversion.

    ``-kappa / sqrt(kappa^2 + exp(-4 beta))`` evaluated in the log domain so
    that tiny ``|kappa|`` and large ``beta`` neither overflow nor underflow.
    Returns 0 for ``kappa == 0``.
    """
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta!r}")
    if kappa == 0:
        return 0.0
    t = -4.0 * beta - 2.0 * math.log(abs(kappa))
    return -math.copysign(math.exp(-0.5 * np.logaddexp(0.0, t)), kappa)


def coherent_state(alpha: float, trunc) -> np.ndarray:
    """Fock amplitudes ``exp(-alpha^2/2) alpha^n / sqrt(n!)`` for real alpha."""
    levels = as_truncation(trunc).n_levels
    n = np.arange(levels)
    with np.errstate(divide="ignore"):
        log_abs = n * np.log(abs(alpha)) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    amp = np.exp(log_abs - 0.5 * gammaln(n + 1) - 0.5 * alpha * alpha)
    if alpha < 0:
        amp = amp * np.where(n % 2 == 0, 1.0, -1.0)
    return amp


@dataclass(frozen=True, eq=False)
class DisplacedState:
    displacement: float
    fock_amplitudes: np.ndarray


def displaced_fock_state(n: int, displacement: float, trunc) -> DisplacedState:
    """``(a^dagger - x)^n / sqrt(n!)`` applied to the coherent state at ``x``.

    Built by repeated operator application; meaningful when ``trunc`` is well
    above ``n`` plus the coherent-state support.
    """
    trunc = as_truncation(trunc)
    ops = build_boson_ops(trunc)
    shifted = ops.a_dag - displacement * np.eye(trunc.n_levels)
    v = coherent_state(displacement, trunc)
    for k in range(1, n + 1):
        v = shifted @ v / math.sqrt(k)
    return DisplacedState(displacement, v)


def ground_wavefunction(params: ModelParams, trunc) -> np.ndarray:
    """Zeroth-order analytic ground state in the interleaved Fock basis.

    Spin up carries ``c_0^- |coherent(-q)>`` and spin down
    ``-d_0^- |coherent(+q)>``.
    """
    if params.delta == 0:
        raise ValueError("analytic ground state requires delta != 0")
    trunc = as_truncation(trunc)
    sol = energies(0, params)
    q = params.q
    up = sol.c_minus * coherent_state(-q, trunc)
    down = -sol.d_minus * coherent_state(q, trunc)
    psi = np.empty(trunc.dim)
    psi[index(UP, 0)::2] = up
    psi[index(DOWN, 0)::2] = down
    norm = float(np.linalg.norm(psi))
    if 1.0 - norm * norm > NORM_DEFICIT_TOL:
        raise ValueError(
            f"n_max={trunc.n_max} too small for coherent support at q={q:.4g} "
            f"(norm deficit {1.0 - norm * norm:.3g})")
    return psi / norm
