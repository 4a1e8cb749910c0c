"""Data for the population-inversion, cusp and fidelity-susceptibility figures.

Every job writes one CSV per curve and a ``manifest.json`` that records all
parameters, including the package defaults (tunneling delta/omega = 1e-2 for
both models, 401-point grids).
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__, scaling
from .observables import cusp_depth, half_depth_width
from .sweep import Grid, SweepSpec, format_csv, run_sweep, write_csv
from .truncation import choose_truncation

FIGURES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b")
DEFAULTS = {
    "delta_over_omega_rabi": 1e-2,
    "delta_over_omega_jc": 1e-2,
    "grid_points": 401,
    "omega": 1.0,
    "fig3_kappa": 1e-2,
    "truncation": "adaptive cutoff at the largest coupling of each curve (tol 1e-10)",
}
FIG1A_KAPPAS = (1e-6, 1e-4, 1e-2)
COLLAPSE_KAPPAS = (1e-10, 1e-6, 1e-2, 1e-1)
FIG2C_KAPPAS = (1e-10, 1e-6, 1e-2, 1e-1)


def _curve_truncation(spec: SweepSpec, target="ground") -> int:
    """Cutoff converged at the largest coupling of the curve."""
    values = spec.grid.values()
    lam_max = 0.0
    for value in values:
        try:
            lam_max = max(lam_max, spec.params_at(float(value)).lam)
        except ValueError:
            continue
    probe = spec.params_at(float(values[-1])).replace(lam=lam_max)
    return choose_truncation(probe, target=target, kind=spec.model).n_max


def _with_truncation(spec: SweepSpec, target="ground") -> SweepSpec:
    fields = spec.to_dict()
    fields["grid"] = spec.grid
    fields["n_max"] = _curve_truncation(spec, target)
    return SweepSpec(**fields)


def _tag(kappa: float) -> str:
    return f"kappa_{kappa:.0e}".replace("+", "").replace("-0", "-")


def _peak(x, y) -> dict:
    x = np.asarray(x)
    y = np.asarray(y)
    i = int(np.nanargmax(y))
    step = float(x[1] - x[0])
    return {"location": float(x[i]), "value": float(y[i]), "grid_step": step}


def _rabi_scaling_curves(out_dir, name, kappas, swept, grid, observables, manifest):
    delta = DEFAULTS["delta_over_omega_rabi"]
    results = {}
    for kappa in kappas:
        spec = _with_truncation(SweepSpec(model="rabi", delta=delta, epsilon=kappa * delta,
                                          omega=1.0, swept=swept, grid=grid,
                                          observables=observables))
        result = run_sweep(spec)
        path = write_csv(result, out_dir / f"{name}_{_tag(kappa)}.csv",
                         {"figure": name, "kappa": kappa})
        manifest["curves"].append({"file": path.name, "kappa": kappa, "n_max": spec.n_max,
                                   "spec": spec.to_dict()})
        results[kappa] = result
    return results


def _fig1a(out_dir, manifest):
    grid = Grid(0.0, 2.0, DEFAULTS["grid_points"])
    results = _rabi_scaling_curves(out_dir, "fig1a", FIG1A_KAPPAS, "beta_prime", grid,
                                   ("sigma_z", "analytic_sigma_z"), manifest)
    at_one = {}
    for kappa, result in results.items():
        x = result.column("beta_prime")
        i = int(np.argmin(np.abs(x - 1.0)))
        at_one[str(kappa)] = {"analytic": result.rows[i]["analytic_sigma_z"],
                              "numeric": result.rows[i]["sigma_z"]}
    manifest["summary"] = {"fixed_point": scaling.FIXED_POINT, "value_at_beta_prime_1": at_one}


def _fig1b(out_dir, manifest):
    grid = Grid(-1.0, 1.0, DEFAULTS["grid_points"])
    results = _rabi_scaling_curves(out_dir, "fig1b", COLLAPSE_KAPPAS, "beta_double_prime", grid,
                                   ("sigma_z", "analytic_sigma_z"), manifest)
    x = grid.values()
    universal = scaling.universal_curve(x)
    rows = []
    worst_analytic = worst_numeric = 0.0
    for i, xi in enumerate(x):
        row = {"beta_double_prime": xi, "universal": universal[i]}
        analytic, numeric = [], []
        for kappa, result in results.items():
            a = result.rows[i].get("analytic_sigma_z")
            n = result.rows[i].get("sigma_z")
            row[f"analytic_{_tag(kappa)}"] = a
            row[f"numeric_{_tag(kappa)}"] = n
            if a is not None:
                analytic.append(a)
            if n is not None:
                numeric.append(n)
        dev_a = max(analytic + [universal[i]]) - min(analytic + [universal[i]]) if analytic else None
        dev_n = max(numeric + [universal[i]]) - min(numeric + [universal[i]]) if numeric else None
        row["max_pairwise_deviation_analytic"] = dev_a
        row["max_pairwise_deviation_numeric"] = dev_n
        worst_analytic = max(worst_analytic, dev_a or 0.0)
        worst_numeric = max(worst_numeric, dev_n or 0.0)
        rows.append(row)
    columns = list(rows[0].keys())
    (out_dir / "fig1b_collapse.csv").write_text(
        format_csv(columns, rows, {"figure": "fig1b", "note": "deviations include universal curve; "
                                   "points with beta < 0 for a kappa are blank"}))
    manifest["curves"].append({"file": "fig1b_collapse.csv"})
    manifest["summary"] = {"max_deviation_analytic": worst_analytic,
                           "max_deviation_numeric": worst_numeric}


def _fig2a(out_dir, manifest):
    grid = Grid(0.0, 2.0, DEFAULTS["grid_points"])
    _rabi_scaling_curves(out_dir, "fig2a", (1e-6,), "beta_prime", grid,
                         ("sigma_z", "analytic_sigma_z"), manifest)


def _jc_curve(out_dir, name, delta, kappa, ratio_grid, observables, manifest, target="ground"):
    lam_c = math.sqrt(abs(delta))
    grid = Grid(ratio_grid[0] * lam_c, ratio_grid[1] * lam_c, DEFAULTS["grid_points"])
    spec = _with_truncation(SweepSpec(model="jc", delta=delta, epsilon=kappa * delta, omega=1.0,
                                      swept="lambda", grid=grid, observables=observables), target)
    result = run_sweep(spec)
    sign = "pos" if delta > 0 else "neg"
    path = write_csv(result, out_dir / f"{name}_delta_{sign}_{_tag(kappa)}.csv",
                     {"figure": name, "kappa": kappa, "lambda_c": lam_c})
    manifest["curves"].append({"file": path.name, "kappa": kappa, "delta": delta,
                               "n_max": spec.n_max, "spec": spec.to_dict()})
    return result


def _fig2b(out_dir, manifest):
    delta = DEFAULTS["delta_over_omega_jc"]
    manifest["note"] = "JC curves use lambda/lambda_c as the abscissa"
    for d in (delta, -delta):
        _jc_curve(out_dir, "fig2b", d, 1e-6, (0.0, 2.0), ("sigma_z", "parity"), manifest)


def _fig2c(out_dir, manifest):
    delta = DEFAULTS["delta_over_omega_jc"]
    summary = {}
    for kappa in FIG2C_KAPPAS:
        result = _jc_curve(out_dir, "fig2c", delta, kappa, (0.5, 1.5), ("sigma_z",), manifest)
        x = result.column("lambda_over_lambda_c")
        y = result.column("sigma_z")
        summary[str(kappa)] = {"depth": cusp_depth(y), "minimum": float(np.min(y)),
                               "width_at_half_depth": half_depth_width(x, y)}
    manifest["summary"] = summary


def _fig3a(out_dir, manifest):
    delta = DEFAULTS["delta_over_omega_jc"]
    kappa = DEFAULTS["fig3_kappa"]
    result = _jc_curve(out_dir, "fig3a", delta, kappa, (0.5, 1.5),
                       ("energies", "s_f", "sigma_z"), manifest, target="full_spectrum")
    peak = _peak(result.column("lambda_over_lambda_c"), result.column("s_f"))
    peak["within_one_step_of_1"] = abs(peak["location"] - 1.0) <= peak["grid_step"] * (1 + 1e-9)
    manifest["summary"] = {"s_f_peak": peak}


def _fig3b(out_dir, manifest):
    kappa = DEFAULTS["fig3_kappa"]
    delta = DEFAULTS["delta_over_omega_rabi"]
    grid = Grid(0.0, 2.0, DEFAULTS["grid_points"])
    spec = _with_truncation(SweepSpec(model="rabi", delta=delta, epsilon=kappa * delta, omega=1.0,
                                      swept="beta_prime", grid=grid,
                                      observables=("energies", "s_f", "sigma_z")), "full_spectrum")
    result = run_sweep(spec)
    path = write_csv(result, out_dir / f"fig3b_{_tag(kappa)}.csv", {"figure": "fig3b", "kappa": kappa})
    manifest["curves"].append({"file": path.name, "kappa": kappa, "n_max": spec.n_max,
                               "spec": spec.to_dict()})
    peak = _peak(result.column("beta_prime"), result.column("s_f"))
    peak["within_one_step_of_1"] = abs(peak["location"] - 1.0) <= peak["grid_step"] * (1 + 1e-9)
    manifest["summary"] = {"s_f_peak": peak}


_JOBS = {"fig1a": _fig1a, "fig1b": _fig1b, "fig2a": _fig2a, "fig2b": _fig2b,
         "fig2c": _fig2c, "fig3a": _fig3a, "fig3b": _fig3b}


def figure_job(name: str, out_dir) -> list[Path]:
    """Write the CSV files and manifest for one figure; returns the paths written."""
    if name not in _JOBS:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURES}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"figure": name, "generator": f"rabiscale {__version__}",
                "defaults": DEFAULTS, "curves": []}
    _JOBS[name](out_dir, manifest)
    manifest_path = out_dir / f"{name}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return [out_dir / c["file"] for c in manifest["curves"]] + [manifest_path]
