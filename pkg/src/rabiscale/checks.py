"""Acceptance checks with pinned tolerances and a machine-readable report."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import displaced, eigensolver, experiment, scaling
from .hamiltonians import build_displaced_matrix, build_jc, build_parity, build_rabi
from .model import ModelParams
from .observables import (
    NoMinimumError, cusp_depth, fidelity_susceptibility_fd, fidelity_susceptibility_sum,
    find_crossing, half_depth_width, parity_expectation, population_inversion,
)
from .sweep import Grid, SweepSpec, run_sweep
from .truncation import choose_truncation

KAPPAS = (1e-10, 1e-6, 1e-2, 1e-1)
DELTA_RABI = 1e-2
FIG_POINTS = 401


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    measured: dict
    tolerance: dict
    runtime_s: float = 0.0
    notes: list = field(default_factory=list)


def _numeric_sigma_z(params: ModelParams) -> tuple[float, np.ndarray, int]:
    n_max = choose_truncation(params).n_max
    psi = eigensolver.ground(build_rabi(params, n_max)).vector
    return population_inversion(psi, "rabi"), psi, n_max


def check_critical_scale() -> CheckResult:
    bc = scaling.beta_c(1e-6)
    lam = math.sqrt(bc)
    ok = abs(bc - 6.7345) <= 0.005 and abs(lam - 2.595) <= 0.005
    return CheckResult(1, "critical scale beta_c(1e-6)", ok,
                       {"beta_c": bc, "sqrt_beta_c": lam},
                       {"beta_c": "6.7345 +/- 0.005", "sqrt_beta_c": "2.595 +/- 0.005"})


def check_fixed_point() -> CheckResult:
    target = scaling.FIXED_POINT
    analytic = {k: scaling.sigma_z_of_beta_prime(1.0, k) for k in KAPPAS}
    numeric = {}
    for kappa in KAPPAS:
        beta = scaling.beta_c(kappa)
        p = ModelParams(DELTA_RABI, kappa * DELTA_RABI, 1.0, math.sqrt(beta))
        numeric[kappa] = _numeric_sigma_z(p)[0]
    err_a = max(abs(v - target) for v in analytic.values())
    err_n = max(abs(v - target) for v in numeric.values())
    return CheckResult(2, "fixed point -1/sqrt(3) at beta'=1", err_a <= 1e-12 and err_n <= 2e-2,
                       {"analytic_max_error": err_a, "numeric_max_error": err_n,
                        "numeric": {str(k): v for k, v in numeric.items()}},
                       {"analytic": 1e-12, "numeric": 2e-2})


def _collapse_series(kappa, grid, numeric: bool):
    xs, ys = [], []
    for x in grid:
        beta = scaling.unscale(x, kappa, "double_prime")
        if beta < 0:
            continue
        if numeric:
            p = ModelParams(DELTA_RABI, kappa * DELTA_RABI, 1.0, math.sqrt(beta))
            n_max = max(32, math.ceil(4 * (beta + 3 * math.sqrt(beta)) + 20))
            psi = eigensolver.ground(build_rabi(p, n_max)).vector
            ys.append(population_inversion(psi, "rabi"))
        else:
            ys.append(displaced.ground_sigma_z(beta, kappa))
        xs.append(x)
    return np.array(xs), np.array(ys)


def _collapse_metrics(series):
    """Max deviation from the universal curve and max pairwise deviation on shared points."""
    from_universal = max(float(np.max(np.abs(y - scaling.universal_curve(x)))) for x, y in series)
    pairwise = 0.0
    for i in range(len(series)):
        for j in range(i + 1, len(series)):
            xi, yi = series[i]
            xj, yj = series[j]
            common, ia, ja = np.intersect1d(xi, xj, return_indices=True)
            if common.size:
                pairwise = max(pairwise, float(np.max(np.abs(yi[ia] - yj[ja]))))
    return from_universal, pairwise


def check_collapse(numeric_points: int = 81) -> CheckResult:
    dense = np.linspace(-1.0, 1.0, FIG_POINTS)
    analytic = [_collapse_series(k, dense, numeric=False) for k in KAPPAS]
    a_univ, a_pair = _collapse_metrics(analytic)
    coarse = np.linspace(-1.0, 1.0, numeric_points)
    numeric = [_collapse_series(k, coarse, numeric=True) for k in KAPPAS]
    n_univ, n_pair = _collapse_metrics(numeric)
    ok = max(a_univ, a_pair) <= 1e-12 and max(n_univ, n_pair) <= 2e-2
    return CheckResult(3, "scaling collapse on beta'' in [-1, 1]", ok,
                       {"analytic_vs_universal": a_univ, "analytic_pairwise": a_pair,
                        "numeric_vs_universal": n_univ, "numeric_pairwise": n_pair},
                       {"analytic": 1e-12, "numeric": 2e-2},
                       notes=["points with beta < 0 (kappa=0.1, beta'' < -0.188) are excluded"])


def check_zeroth_order_accuracy(points: int = 91) -> CheckResult:
    kappa = 1e-2
    worst, worst_overlap = 0.0, 1.0
    for beta in np.linspace(0.0, 9.0, points):
        p = ModelParams(DELTA_RABI, kappa * DELTA_RABI, 1.0, math.sqrt(beta))
        value, psi, n_max = _numeric_sigma_z(p)
        worst = max(worst, abs(value - displaced.ground_sigma_z(beta, kappa)))
        analytic = displaced.ground_wavefunction(p, n_max)
        worst_overlap = min(worst_overlap, abs(float(analytic @ psi)))
    return CheckResult(4, "zeroth-order formula vs dense diagonalization", worst < 1e-2 and worst_overlap > 0.999,
                       {"sup_sigma_z_error": worst, "min_overlap": worst_overlap},
                       {"sup_sigma_z_error": "< 1e-2", "min_overlap": "> 0.999"})


def check_jc_crossing() -> CheckResult:
    measured, ok = {}, True
    for delta in (1e-2, 1e-1):
        lam_c = math.sqrt(delta)
        rng = (0.5 * lam_c, 1.5 * lam_c)
        sharp = find_crossing(ModelParams(delta, 0.0, 1.0, 0.0), "jc", rng, 64)
        biased = find_crossing(ModelParams(delta, 1e-2 * delta, 1.0, 0.0), "jc", rng, 64)
        try:
            negative = find_crossing(ModelParams(-delta, 0.0, 1.0, 0.0), "jc", rng, 64)
            negative_kind = negative.kind
        except NoMinimumError:
            negative_kind = "none"
        flips = (sharp.parity_before is not None
                 and np.sign(sharp.parity_before) != np.sign(sharp.parity_after))
        entry = {"location": sharp.location, "error": abs(sharp.location - lam_c),
                 "kind": sharp.kind, "parity_flip": bool(flips),
                 "biased_kind": biased.kind, "biased_min_gap": biased.min_gap,
                 "negative_delta": negative_kind}
        measured[str(delta)] = entry
        ok &= (entry["error"] <= 1e-4 and sharp.kind == "crossing" and flips
               and biased.kind == "avoided" and biased.min_gap > 0
               and negative_kind != "crossing")
    return CheckResult(5, "JC ground-level crossing at sqrt(omega delta)", bool(ok), measured,
                       {"location": 1e-4, "crossing_gap": 1e-8})


def check_parity() -> CheckResult:
    n_max = 40
    rabi = build_rabi(ModelParams(0.1, 0.0, 1.0, 0.7), n_max)
    jc = build_jc(ModelParams(0.1, 0.0, 1.0, 0.7), n_max)
    from .hamiltonians import commutator_norm
    c_rabi = commutator_norm(rabi, build_parity(n_max, "rabi")) / rabi.norm()
    c_jc = commutator_norm(jc, build_parity(n_max, "jc_rotated")) / jc.norm()
    worst = 0.0
    for lam in np.linspace(0.0, 3.0, 31):
        p = ModelParams(DELTA_RABI, 0.0, 1.0, lam)
        n_max_l = choose_truncation(p).n_max
        psi = eigensolver.ground(build_rabi(p, n_max_l)).vector
        worst = max(worst, abs(parity_expectation(psi, "rabi") - 1.0))
    lam_c = math.sqrt(0.1)
    before = parity_expectation(eigensolver.ground(build_jc(ModelParams(0.1, 0, 1, 0.8 * lam_c), 32)).vector, "jc_rotated")
    after = parity_expectation(eigensolver.ground(build_jc(ModelParams(0.1, 0, 1, 1.2 * lam_c), 32)).vector, "jc_rotated")
    ok = c_rabi < 1e-12 and c_jc < 1e-12 and worst <= 1e-8 and before > 0 > after
    return CheckResult(6, "parity symmetry and ground-state parity", ok,
                       {"rabi_commutator_rel": c_rabi, "jc_commutator_rel": c_jc,
                        "rabi_parity_max_error": worst, "jc_parity_before": before,
                        "jc_parity_after": after},
                       {"commutator": 1e-12, "parity": 1e-8})


FD_POINTS = tuple(("rabi", lam) for lam in (0.1, 0.3, 0.5, 0.8, 1.2)) + \
    tuple(("jc", lam) for lam in (0.05, 0.15, 0.25, 0.4, 0.6))


def check_fidelity_susceptibility() -> CheckResult:
    worst = 0.0
    for kind, lam in FD_POINTS:
        p = ModelParams(0.1, 0.001, 1.0, lam)
        s = fidelity_susceptibility_sum(p, kind, 48)
        f = fidelity_susceptibility_fd(p, kind, 48, 1e-3)
        worst = max(worst, abs(f - s) / s)
    point = fidelity_susceptibility_sum(ModelParams(0.1, 0.0, 1.0, 0.0), "rabi", 32)
    point_err = abs(point - 1.0 / 1.1**2) / (1.0 / 1.1**2)

    lam_c = math.sqrt(DELTA_RABI)
    jc = run_sweep(SweepSpec(model="jc", delta=DELTA_RABI, epsilon=1e-2 * DELTA_RABI, swept="lambda",
                             grid=Grid(0.5 * lam_c, 1.5 * lam_c, FIG_POINTS), observables=("s_f",),
                             n_max=32))
    x = jc.column("lambda_over_lambda_c")
    jc_peak = float(x[np.nanargmax(jc.column("s_f"))])
    jc_step = float(x[1] - x[0])

    kappa = 1e-2
    n_max = choose_truncation(ModelParams(DELTA_RABI, kappa * DELTA_RABI, 1.0,
                                          math.sqrt(2 * scaling.beta_c(kappa))),
                              target="full_spectrum").n_max
    rabi = run_sweep(SweepSpec(model="rabi", delta=DELTA_RABI, epsilon=kappa * DELTA_RABI,
                               swept="beta_prime", grid=Grid(0.0, 2.0, FIG_POINTS),
                               observables=("s_f",), n_max=n_max))
    bp = rabi.column("beta_prime")
    rabi_peak = float(bp[np.nanargmax(rabi.column("s_f"))])
    rabi_step = float(bp[1] - bp[0])

    ok_jc = abs(jc_peak - 1.0) <= jc_step * (1 + 1e-9)
    ok_rabi = abs(rabi_peak - 1.0) <= rabi_step * (1 + 1e-9)
    ok = worst <= 1e-2 and point_err <= 1e-6 and ok_jc and ok_rabi
    return CheckResult(7, "fidelity susceptibility", ok,
                       {"sum_vs_fd_max_rel": worst, "point_rel_error": point_err,
                        "jc_peak_lambda_over_lambda_c": jc_peak, "jc_grid_step": jc_step,
                        "jc_peak_ok": ok_jc,
                        "rabi_peak_beta_prime": rabi_peak, "rabi_grid_step": rabi_step,
                        "rabi_peak_ok": ok_rabi},
                       {"sum_vs_fd": 1e-2, "point": 1e-6, "peak": "one grid step"})


def check_cusp() -> CheckResult:
    lam_c = math.sqrt(DELTA_RABI)
    depths, widths = [], []
    for kappa in (1e-1, 1e-2, 1e-6, 1e-10):
        result = run_sweep(SweepSpec(model="jc", delta=DELTA_RABI, epsilon=kappa * DELTA_RABI,
                                     swept="lambda", grid=Grid(0.5 * lam_c, 1.5 * lam_c, FIG_POINTS),
                                     observables=("sigma_z",), n_max=32))
        x = result.column("lambda_over_lambda_c")
        y = result.column("sigma_z")
        depths.append(cusp_depth(y))
        widths.append(half_depth_width(x, y))
    increasing = all(b > a for a, b in zip(depths, depths[1:]))
    narrowing = all(b <= a for a, b in zip(widths, widths[1:]))
    return CheckResult(8, "JC cusp deepens as kappa decreases", increasing and narrowing,
                       {"depths": depths, "half_depth_widths": widths},
                       {"depth": "strictly increasing", "width": "non-increasing"},
                       notes=["depth measured below the end-of-scan background"])


def check_cross_basis() -> CheckResult:
    worst = 0.0
    for delta in (1e-2, 1e-1):
        for kappa in (1e-2, 1.0):
            for q in (0.5, 1.5):
                p = ModelParams(delta, kappa * delta, 1.0, q)
                n_fock = choose_truncation(p, target="full_spectrum").n_max
                fock = eigensolver.eigh(build_rabi(p, n_fock)).values[:6]
                disp = eigensolver.eigh(build_displaced_matrix(p, 40)).values[:6]
                disp2 = eigensolver.eigh(build_displaced_matrix(p, 80)).values[:6]
                if np.max(np.abs(disp2 - disp)) > 1e-10:
                    disp = disp2
                worst = max(worst, float(np.max(np.abs(fock - disp))))
    return CheckResult(9, "displaced basis vs Fock basis spectra", worst <= 1e-6,
                       {"max_abs_difference_over_omega": worst}, {"levels": 6, "abs": 1e-6})


def check_platform_maps() -> CheckResult:
    two_pi = 2 * math.pi
    strong = experiment.reference_circuit_qed(two_pi * 40e6, epsilon=two_pi * 20e3)
    weak = experiment.reference_circuit_qed(two_pi * 4e6, epsilon=two_pi * 20e3)
    cases = {
        "circuit-qed strong": (strong, experiment.map_circuit_qed, experiment.circuit_qed_hamiltonian),
        "circuit-qed weak": (weak, experiment.map_circuit_qed, experiment.circuit_qed_hamiltonian),
        "nv": (experiment.NvParams(0.01, 0.002, 1.0, 1.0), experiment.map_nv, experiment.nv_hamiltonian),
        "ion": (experiment.IonParams(two_pi * 10e3, two_pi * 1e3, two_pi * 1e6, 1.0),
                experiment.map_ion, experiment.ion_hamiltonian),
    }
    measured = {}
    worst = 0.0
    for name, (platform, mapper, direct) in cases.items():
        params, regime = mapper(platform)
        mapped = eigensolver.eigh(build_rabi(params, 8)).values / params.omega
        native = eigensolver.eigh(direct(platform, 8)).values / params.omega
        err = float(np.max(np.abs(mapped - native)))
        worst = max(worst, err)
        measured[name] = {"regime": regime, "spectrum_error": err}
    ok = (measured["circuit-qed strong"]["regime"] == "rabi_valid"
          and measured["circuit-qed weak"]["regime"] == "jc_valid" and worst <= 1e-10)
    return CheckResult(10, "platform parameter maps", ok, measured,
                       {"spectrum_over_omega": 1e-10})


CRITERIA = {
    1: (check_critical_scale, True),
    2: (check_fixed_point, True),
    3: (check_collapse, False),
    4: (check_zeroth_order_accuracy, False),
    5: (check_jc_crossing, True),
    6: (check_parity, True),
    7: (check_fidelity_susceptibility, False),
    8: (check_cusp, False),
    9: (check_cross_basis, True),
    10: (check_platform_maps, True),
}


def run_check(number: int) -> CheckResult:
    func, _ = CRITERIA[number]
    start = time.perf_counter()
    try:
        result = func()
    except Exception as exc:  # report, never crash the runner
        result = CheckResult(number, func.__name__, False, {"error": repr(exc)}, {})
    result.runtime_s = time.perf_counter() - start
    return result


def run_checks(level: str = "fast") -> dict:
    """Run the acceptance criteria; ``fast`` skips the sweep-heavy ones."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    selected = [n for n, (_, fast) in CRITERIA.items() if level == "full" or fast]
    results = [run_check(n) for n in selected]
    return {"level": level, "passed": all(r.passed for r in results),
            "criteria": [asdict(r) for r in results]}
