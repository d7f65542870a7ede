"""Command line: figure reproduction, metric solving, spectra and verification.

Exit codes: 0 success (an empty solve is a success), 1 verification failed,
2 bad configuration or parameter domain, 3 Hamiltonian outside the solver's
subclass, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .counterpart import (
    conjugation_oracle,
    extended_conjugation_oracle,
    verify_dyson_map,
    verify_pseudo_quasi_hermiticity,
)
from .figures import FIGURES, FigureData
from .linear_metric import (
    DomainError,
    GateViolation,
    LinearMetricParams,
    solve_gamma_zero_family,
    solve_lambda_zero_family,
    solve_linear_family,
    solve_quadratic_family,
)
from .quad_metric import (
    QuadMetricParams,
    quad_conjugate,
    quad_dyson_operator,
    solve_quad_constraints_spin1,
)
from .spectra import compare_spectra, eigenvalues, reality_scan
from .su2_core import (
    QuadHamiltonianParams,
    SigmaParams,
    build_hamiltonian,
    from_sigma,
    residual_norm,
    spin_rep_from_two_l,
)

__all__ = ["main", "DEFAULT_CONFIG", "load_config", "write_spectrum_csv", "CSV_SCHEMA"]

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_GATE, EXIT_IO = 0, 1, 2, 3, 4
CSV_SCHEMA = "su2metric-spectrum v1"
COMMANDS = ("repro", "solve", "spectrum", "verify")
FAMILIES = ("linear", "quadratic-gamma0zero", "appendix-gamma-zero", "appendix-lambda-zero", "quad-exponent")

DEFAULT_CONFIG = {
    "hamiltonian": None,
    "sigma": None,
    "metric": {
        "family": "linear",
        "direction": [1.0, 1.0, 0.0],
        "nu": 0.2,
        "mode": "validate",
        "seed": [0.0, 0.25],
        "params": None,
    },
    "two_l": 4,
    "grid": None,
    "tol": 1e-8,
    "out": "su2metric_out",
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- configuration


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: str | None, overrides: dict | None = None) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(user) - set(DEFAULT_CONFIG) - {"command"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = _merge(cfg, user)
    for k, v in (overrides or {}).items():
        if v is not None:
            cfg[k] = v
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    two_l = cfg["two_l"]
    if isinstance(two_l, bool) or not isinstance(two_l, int) or two_l < 0:
        raise ConfigError(f"two_l must be a non-negative integer, got {two_l!r}")
    if cfg["hamiltonian"] is not None and cfg["sigma"] is not None:
        raise ConfigError("give either 'hamiltonian' or 'sigma', not both")
    tol = cfg["tol"]
    if not isinstance(tol, (int, float)) or not tol > 0:
        raise ConfigError(f"tol must be positive, got {tol!r}")
    fam = cfg["metric"].get("family")
    if fam not in FAMILIES:
        raise ConfigError(f"metric.family must be one of {FAMILIES}, got {fam!r}")
    grid = cfg["grid"]
    if grid is not None:
        if not isinstance(grid, dict) or set(grid) != {"param", "min", "max", "points"}:
            raise ConfigError("grid needs exactly the keys param, min, max, points")
        if not isinstance(grid["points"], int) or grid["points"] < 2:
            raise ConfigError("grid.points must be an integer >= 2")
        if grid["param"] not in QuadHamiltonianParams.field_names():
            raise ConfigError(f"grid.param must name a coupling, got {grid['param']!r}")


def _hamiltonian(cfg: dict) -> QuadHamiltonianParams:
    try:
        if cfg["sigma"] is not None:
            return from_sigma(SigmaParams(**cfg["sigma"]))
        return QuadHamiltonianParams(**(cfg["hamiltonian"] or {}))
    except TypeError as exc:
        raise ConfigError(f"bad Hamiltonian parameters: {exc}") from exc


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError("complex values are written as [re, im]")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _metric(cfg: dict):
    mc = cfg["metric"]
    params = mc.get("params")
    if params is None:
        raise ConfigError("metric.params is required")
    try:
        if mc["family"] == "quad-exponent":
            return QuadMetricParams(
                float(params.get("zeta0", 0.0)),
                _complex(params.get("zetaPlus", 0.0)),
                _complex(params.get("zetaMinus", 0.0)),
            )
        return LinearMetricParams(**params)
    except TypeError as exc:
        raise ConfigError(f"bad metric parameters: {exc}") from exc


# ---------------------------------------------------------------- output


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_spectrum_csv(path: Path, sweep: np.ndarray, spectra: np.ndarray, label: str) -> None:
    """One row per (sweep value, eigenvalue index)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {CSV_SCHEMA} {label}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sweep_value", "eig_index", "re", "im"])
        for x, row in zip(sweep, spectra):
            for k, z in enumerate(row):
                w.writerow([_fmt(x), k, _fmt(z.real), _fmt(z.imag)])


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serializable: {type(o).__name__}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default, allow_nan=True)


def _emit(obj, out_path: Path | None = None) -> None:
    text = _dump(obj)
    if out_path is not None:
        out_path.write_text(text + "\n", encoding="utf-8")
    print(text)


# ---------------------------------------------------------------- commands


def _figure_kwargs(name: str, cfg: dict, explicit_l: bool) -> dict:
    kw = {}
    if explicit_l and name != "fig4":
        kw["two_l"] = cfg["two_l"]
    if name in ("fig1", "fig2"):
        kw["tol"] = cfg["tol"]
    return kw


def cmd_repro(args, cfg) -> int:
    data: FigureData = FIGURES[args.figure](**_figure_kwargs(args.figure, cfg, args.l is not None))
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for series, spectra in data.series.items():
        path = out / f"{data.name}_{series}.csv"
        write_spectrum_csv(path, data.sweep, spectra, f"figure={data.name} series={series} sweep={data.sweep_name}")
        files.append(path.name)
    summary = dict(data.summary, figure=data.name, sweep=data.sweep_name, files=files)
    _emit(summary, out / f"{data.name}_summary.json")
    return EXIT_OK


def _solve(p: QuadHamiltonianParams, cfg: dict):
    mc = cfg["metric"]
    fam = mc["family"]
    if fam == "linear":
        return solve_linear_family(p, LinearMetricParams(*mc["direction"]), tol=1e-9)
    if fam == "quadratic-gamma0zero":
        return solve_quadratic_family(p, mc["nu"], mode=mc["mode"])
    if fam == "appendix-gamma-zero":
        return solve_gamma_zero_family(p, mc["nu"], mode=mc["mode"])
    if fam == "appendix-lambda-zero":
        return solve_lambda_zero_family(p, mc["nu"], mode=mc["mode"])
    raise AssertionError(fam)


def cmd_solve(args, cfg) -> int:
    p = _hamiltonian(cfg)
    fam = cfg["metric"]["family"]
    rep = spin_rep_from_two_l(cfg["two_l"])
    if fam == "quad-exponent":
        sols = solve_quad_constraints_spin1(p, tuple(cfg["metric"]["seed"]), rep, tol=cfg["tol"])
        items = [dict(s.as_dict(), oracleResidual=s.hermiticity_residual) for s in sols]
        diagnostics = [] if sols else ["no consistent solution"]
    else:
        result = _solve(p, cfg)
        items = []
        for s in result:
            hc = extended_conjugation_oracle(build_hamiltonian(s.hamiltonian, rep), s.metric, rep)
            items.append(dict(s.as_dict(), oracleResidual=residual_norm(hc - hc.conj().T)))
        diagnostics = list(result.diagnostics)
    _emit({"family": fam, "twoL": cfg["two_l"], "count": len(items), "solutions": items, "diagnostics": diagnostics})
    return EXIT_OK


def cmd_spectrum(args, cfg) -> int:
    p = _hamiltonian(cfg)
    rep = spin_rep_from_two_l(cfg["two_l"])
    grid = cfg["grid"]
    if grid is None:
        s = eigenvalues(build_hamiltonian(p, rep), real_tol=cfg["tol"])
        _emit(
            {
                "eigenvalues": [[z.real, z.imag] for z in s.eigenvalues],
                "maxImagAbs": s.max_imag_abs,
                "isReal": s.is_real,
                "conjugatePaired": s.conjugate_paired,
            }
        )
        return EXIT_OK
    xs = np.linspace(grid["min"], grid["max"], grid["points"])
    scan = reality_scan(p, grid["param"], xs, rep, tol=cfg["tol"])
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    path = out / "spectrum.csv"
    write_spectrum_csv(path, xs, scan.spectra, f"series=hamiltonian sweep={grid['param']}")
    _emit(
        {
            "parameter": grid["param"],
            "maxImag": scan.max_imag.tolist(),
            "breakdownBrackets": [list(b) for b in scan.breakdown_brackets],
            "files": [path.name],
        },
        out / "spectrum_summary.json",
    )
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    p = _hamiltonian(cfg)
    rep = spin_rep_from_two_l(cfg["two_l"])
    m = _metric(cfg)
    h = build_hamiltonian(p, rep)
    tol = cfg["tol"]
    if isinstance(m, QuadMetricParams):
        report = verify_dyson_map(h, quad_dyson_operator(m, rep), tol)
        counterpart = quad_conjugate(h, m, rep)
    else:
        report = verify_pseudo_quasi_hermiticity(h, m, rep, tol)
        counterpart = conjugation_oracle(h, m, rep)
    match = compare_spectra(h, counterpart, max(tol, 1e-8))
    passed = report.passed and match.matched
    _emit(dict(report.as_dict(), spectraMatched=match.matched, maxPairDistance=match.max_pair_distance, passed=passed))
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--l", type=int, help="2l as an integer (e.g. 10 for l = 5)")
    common.add_argument("--tol", type=float, help="tolerance for checks")
    common.add_argument("--print-config", action="store_true", help="print the effective configuration and exit")

    parser = argparse.ArgumentParser(prog="su2metric", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("repro", parents=[common], help="reproduce a worked example as CSV + JSON")
    rp.add_argument("figure", choices=sorted(FIGURES))
    sub.add_parser("solve", parents=[common], help="solve for metrics of the configured Hamiltonian")
    sub.add_parser("spectrum", parents=[common], help="spectrum at a point or across a grid")
    sub.add_parser("verify", parents=[common], help="check a given metric against a Hamiltonian")
    return parser


_HANDLERS = {"repro": cmd_repro, "solve": cmd_solve, "spectrum": cmd_spectrum, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, {"two_l": args.l, "tol": args.tol, "out": args.out})
        if args.print_config:
            print(_dump(dict(cfg, command=args.command)))
            return EXIT_OK
        return _HANDLERS[args.command](args, cfg)
    except GateViolation as exc:
        print(f"error: gate violation: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
