"""Command-line entry point: sweeps, figure data, spectra, platform maps, checks.

Settings are resolved as built-in defaults < ``--config`` file < flags. The
config file is INI-style with sections ``[model]``, ``[sweep]``,
``[experiment]`` and ``[output]``; keys use the flag names without dashes
(``nmax``, ``lambda``, ``from``...). Platform parameters for ``map`` live in
``[experiment]`` or come from repeated ``--param name=value`` flags.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__, eigensolver, experiment
from .checks import run_checks
from .figures import FIGURES, figure_job
from .hamiltonians import build
from .model import ModelParams
from .sweep import (
    SWEEP_OBSERVABLES, SWEPT, Grid, SweepSpec, default_threads, format_csv, run_sweep, write_csv,
)
from .truncation import choose_truncation

SECTIONS = {
    "model": ("model", "delta", "epsilon", "omega", "lambda", "nmax"),
    "sweep": ("swept", "from", "to", "points", "spacing", "observables", "threads"),
    "experiment": ("system",),
    "output": ("out",),
}
DEFAULTS = {"model": "rabi", "delta": 0.01, "epsilon": 0.0, "omega": 1.0, "lambda": 0.0,
            "nmax": "auto", "swept": "lambda", "from": 0.0, "to": 1.0, "points": 11,
            "spacing": "linear", "observables": "sigma_z", "threads": None, "out": None,
            "system": None}
FLOATS = ("delta", "epsilon", "omega", "lambda", "from", "to")


class CliError(Exception):
    pass


def _load_config(path) -> tuple[dict, dict]:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # platform names are case-sensitive (omega_1 vs Omega_1)
    if not parser.read(path):
        raise CliError(f"cannot read config file {path}")
    values, platform = {}, {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise CliError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if section == "experiment" and key != "system":
                platform[key] = value
            elif key not in SECTIONS[section]:
                raise CliError(f"unknown key {key!r} in [{section}]")
            else:
                values[key] = value
    return values, platform


def _settings(args) -> tuple[dict, dict]:
    settings = dict(DEFAULTS)
    platform = {}
    if args.config:
        from_file, platform = _load_config(args.config)
        settings.update(from_file)
    for key in DEFAULTS:
        value = getattr(args, key.replace("lambda", "lam").replace("from", "start"), None)
        if value is not None:
            settings[key] = value
    for key in FLOATS:
        settings[key] = float(settings[key])
    settings["points"] = int(settings["points"])
    if settings["nmax"] != "auto":
        settings["nmax"] = int(settings["nmax"])
    if settings["threads"] is not None:
        settings["threads"] = int(settings["threads"])
    for item in getattr(args, "param", None) or []:
        key, _, value = item.partition("=")
        if not _:
            raise CliError(f"--param expects name=value, got {item!r}")
        platform[key.strip()] = value.strip()
    return settings, platform


def _params(s: dict) -> ModelParams:
    return ModelParams(delta=s["delta"], epsilon=s["epsilon"], omega=s["omega"], lam=s["lambda"])


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(s, platform, args) -> int:
    spec = SweepSpec(model=s["model"], delta=s["delta"], epsilon=s["epsilon"], omega=s["omega"],
                     lam=s["lambda"], swept=s["swept"],
                     grid=Grid(s["from"], s["to"], s["points"], s["spacing"]),
                     observables=tuple(o.strip() for o in s["observables"].split(",")),
                     n_max=s["nmax"])
    threads = s["threads"] if s["threads"] is not None else default_threads()
    result = run_sweep(spec, threads)
    if s["out"]:
        write_csv(result, s["out"])
    else:
        sys.stdout.write(format_csv(result.columns, result.rows,
                                    {"generator": f"rabiscale {__version__}", "spec": spec.to_dict()}))
    return 0


def cmd_figure(s, platform, args) -> int:
    out = s["out"] or f"{args.name}_data"
    for path in figure_job(args.name, out):
        print(path)
    return 0


def cmd_spectrum(s, platform, args) -> int:
    params = _params(s)
    if s["nmax"] == "auto":
        n_max = choose_truncation(params, target="full_spectrum", kind=s["model"]).n_max
    else:
        n_max = s["nmax"]
    values = eigensolver.eigh(build(s["model"], params, n_max)).values[:args.levels]
    report = {"model": s["model"], "params": dataclasses.asdict(params), "n_max": n_max,
              "energies": [float(v) for v in values]}
    _emit(json.dumps(report, indent=2) + "\n", s["out"])
    return 0


def cmd_map(s, platform, args) -> int:
    system = args.system or s["system"]
    if system not in experiment.SYSTEMS:
        raise CliError(f"--system must be one of {sorted(experiment.SYSTEMS)}")
    cls, mapper, _ = experiment.SYSTEMS[system]
    names = [f.name for f in dataclasses.fields(cls) if f.name != "frame_rtol"]
    unknown = sorted(set(platform) - set(names))
    missing = [n for n in names if n not in platform]
    if unknown or missing:
        raise CliError(f"{system} parameters: unknown {unknown}, missing {missing}")
    kwargs = {key: float(value) for key, value in platform.items()}
    params, regime = mapper(cls(**kwargs))
    report = {"system": system, "params": dataclasses.asdict(params), "regime": regime,
              "kappa": params.epsilon / params.delta if params.delta else None,
              "beta": params.beta}
    _emit(json.dumps(report, indent=2) + "\n", s["out"])
    return 0


def cmd_check(s, platform, args) -> int:
    report = run_checks(args.level)
    _emit(json.dumps(report, indent=2, default=str) + "\n", s["out"])
    for item in report["criteria"]:
        status = "PASS" if item["passed"] else "FAIL"
        print(f"[{status}] {item['id']:2d} {item['name']} ({item['runtime_s']:.1f} s)", file=sys.stderr)
    return 0 if report["passed"] else 1


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file with [model] [sweep] [experiment] [output]")
    p.add_argument("--model", choices=("rabi", "jc"))
    p.add_argument("--delta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--nmax", help="Fock cutoff N or 'auto'")
    p.add_argument("--out", help="output file (directory for 'figure')")
    p.add_argument("--threads", type=int, help="worker threads (default: $RABISCALE_THREADS or 1)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabiscale", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rabiscale {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="observables over a parameter grid (CSV)")
    _common(p)
    p.add_argument("--swept", choices=SWEPT)
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--spacing", choices=("linear", "log"))
    p.add_argument("--observables", help=f"comma list from {','.join(SWEEP_OBSERVABLES)}")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="CSV data and manifest for one figure")
    _common(p)
    p.add_argument("name", choices=FIGURES)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("spectrum", help="lowest eigenvalues (JSON)")
    _common(p)
    p.add_argument("--levels", type=int, default=6)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("map", help="platform parameters to model parameters (JSON)")
    _common(p)
    p.add_argument("--system", choices=sorted(experiment.SYSTEMS))
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("check", help="run the acceptance checks (JSON report)")
    _common(p)
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        settings, platform = _settings(args)
        return args.func(settings, platform, args)
    except (CliError, ValueError) as exc:
        print(f"rabiscale: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
