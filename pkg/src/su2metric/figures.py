"""Parameter sweeps behind the four worked examples, shared by the CLI and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .counterpart import counterpart_matrix, verify_dyson_map
from .linear_metric import LinearMetricParams, quadratic_family_forced, solve_couplings
from .quad_metric import (
    figure4_eigenvalues,
    figure4_hamiltonian,
    figure4_metric,
    figure4_numeric_eigenvalues,
    quad_dyson_operator,
)
from .spectra import (
    avoided_crossings,
    compare_spectra,
    eigenvalues,
    hermitian_eigenvalues,
    reality_scan,
)
from .su2_core import (
    QuadHamiltonianParams,
    build_hamiltonian,
    build_spin_rep,
    spin_rep_from_two_l,
)

__all__ = [
    "FigureData",
    "FIGURES",
    "figure1",
    "figure2",
    "figure3",
    "figure4",
    "figure1_params",
    "figure2_params",
    "figure3_params",
    "FIG2_METRIC",
    "FIG3_TEMPLATE",
]

SQRT8 = 2.0 * math.sqrt(2.0)


@dataclass(eq=False)
class FigureData:
    name: str
    sweep_name: str
    sweep: np.ndarray
    series: dict[str, np.ndarray]
    summary: dict = field(default_factory=dict)


# ---------------------------------------------------------------- linear family, Gamma0 != 0


def _fig1_beta0(theta: float) -> float:
    g0 = math.sqrt(max(0.0, 8.0 - theta * theta))
    if theta == 0.0:
        return 64.0 * g0 / 17.0
    sh2 = math.sinh(theta) ** 2
    return 64.0 * g0 * sh2 / (theta * theta + 16.0 * sh2)


def figure1_params(theta: float) -> tuple[QuadHamiltonianParams, LinearMetricParams]:
    """a+ = b+ = 4 with beta0(theta); metric (1, 1, sqrt(8 - theta^2))."""
    p = QuadHamiltonianParams(beta0=_fig1_beta0(theta), alphaP=4.0, betaP=4.0)
    m = LinearMetricParams(1.0, 1.0, math.sqrt(max(0.0, 8.0 - theta * theta)))
    return p, m


def _paired_sweep(name, sweep_name, grid, pairs, two_l, tol):
    rep = spin_rep_from_two_l(two_l)
    hs, cs = [], []
    worst = 0.0
    for p, m in pairs:
        eh = eigenvalues(build_hamiltonian(p, rep)).eigenvalues
        ec = hermitian_eigenvalues(counterpart_matrix(p, m, rep))
        worst = max(worst, compare_spectra(eh, ec, tol).max_pair_distance)
        hs.append(eh)
        cs.append(ec)
    summary = {"matched": worst <= tol, "maxPairDistance": worst, "tol": tol, "twoL": two_l}
    return FigureData(name, sweep_name, np.asarray(grid), {"hamiltonian": np.array(hs), "counterpart": np.array(cs)}, summary)


def figure1(two_l: int = 10, points: int = 25, tol: float = 1e-8) -> FigureData:
    grid = np.linspace(-SQRT8, SQRT8, points)
    return _paired_sweep("fig1", "theta", grid, [figure1_params(t) for t in grid], two_l, tol)


# ---------------------------------------------------------------- quadratic family, Gamma0 = 0

FIG2_LAMBDA, FIG2_NU = 0.3, 0.2
FIG2_METRIC = LinearMetricParams(FIG2_LAMBDA, FIG2_NU * FIG2_LAMBDA, 0.0)
FIG2_BASE = QuadHamiltonianParams(alphaPM=1.0, alphaPP=1.0, alphaP0=2.0, betaP0=1.0, alphaP=1.0)


def figure2_params(beta0: float) -> QuadHamiltonianParams:
    """Couplings on the Gamma0 = 0, Gamma = nu lambda manifold at lambda = 0.3, nu = 0.2.

    betaP = (2 (2 a+ nu - a+0 nu + b+0) + b0 sqrt(1 + nu^2) (t + 1/t)) / 4 with
    t = tanh(2 lambda sqrt(1 + nu^2)); alpha00 and betaPP are then fixed by the
    remaining constraints (they do not depend on beta0).
    """
    b, nu = FIG2_BASE, FIG2_NU
    t = math.tanh(2.0 * FIG2_LAMBDA * math.sqrt(1.0 + nu * nu))
    bp = 0.25 * (2.0 * (2.0 * b.alphaP * nu - b.alphaP0 * nu + b.betaP0) + beta0 * math.sqrt(1.0 + nu * nu) * (t + 1.0 / t))
    return solve_couplings(replace(b, beta0=beta0, betaP=bp), FIG2_METRIC, ("alpha00", "betaPP"))


def figure2(two_l: int = 10, points: int = 25, tol: float = 1e-8, crossing_points: int = 201) -> FigureData:
    grid = np.linspace(-SQRT8, SQRT8, points)
    data = _paired_sweep("fig2", "beta0", grid, [(figure2_params(b), FIG2_METRIC) for b in grid], two_l, tol)
    rep = spin_rep_from_two_l(two_l)

    def levels(b0):
        return hermitian_eigenvalues(counterpart_matrix(figure2_params(b0), FIG2_METRIC, rep)).real

    crossings = avoided_crossings(levels, (grid[0], grid[-1]), points=crossing_points)
    data.summary["avoidedCrossings"] = [{"level": c.level, "location": c.location, "gap": c.gap} for c in crossings]
    return data


# ---------------------------------------------------------------- reality breakdown

FIG3_NU = 0.2
FIG3_TEMPLATE = QuadHamiltonianParams(alphaPM=1.0, alphaPP=1.0, alphaP0=2.0, betaP0=1.0, alphaP=1.0, betaP=2.0)


def figure3_params(p: QuadHamiltonianParams) -> QuadHamiltonianParams:
    """Tie alpha00 and betaPP to beta0 as required by a Gamma0 = 0, Gamma = 0.2 lambda metric."""
    a00, bpp = quadratic_family_forced(p, FIG3_NU)
    return replace(p, alpha00=a00, betaPP=bpp)


def figure3(two_l: int = 10, points: int = 100, beta0_max: float = 5.0, tol: float = 1e-8) -> FigureData:
    """Imaginary parts across beta0; an even point count keeps beta0 = 0 (a pole) off the grid."""
    if points % 2:
        points += 1
    grid = np.linspace(-beta0_max, beta0_max, points)
    rep = spin_rep_from_two_l(two_l)
    scan = reality_scan(FIG3_TEMPLATE, "beta0", grid, rep, tol=tol, adjust=figure3_params)
    pos = [b for b in scan.breakdown_brackets if b[0] > 0]
    neg = [b for b in scan.breakdown_brackets if b[1] < 0]
    inner = {"positive": list(pos[0]) if pos else None, "negative": list(neg[-1]) if neg else None}
    within = all(v is not None and 2.5 <= abs(v[0]) <= 3.5 and 2.5 <= abs(v[1]) <= 3.5 for v in inner.values())
    summary = {
        "breakdownBracket": inner,
        "allBrackets": [list(b) for b in scan.breakdown_brackets],
        "withinExpected": within,
        "twoL": two_l,
    }
    return FigureData("fig3", "beta0", grid, {"hamiltonian": scan.spectra}, summary)


# ---------------------------------------------------------------- quadratic exponent, spin 1


def figure4(points: int = 50, beta0_max: float = 10.0, tol: float = 1e-10) -> FigureData:
    grid = np.linspace(-beta0_max, beta0_max, points)
    rep = build_spin_rep(1)
    eta = quad_dyson_operator(figure4_metric(), rep)
    formula, numeric = [], []
    worst, herm, all_real = 0.0, 0.0, True
    for b in grid:
        f = figure4_eigenvalues(b)
        n = figure4_numeric_eigenvalues(b)
        worst = max(worst, float(np.max(np.abs(f - n))))
        all_real = all_real and bool(np.all(np.abs(n.imag) <= 1e-8 * (1 + np.abs(n))))
        herm = max(herm, verify_dyson_map(figure4_hamiltonian(b, rep), eta).counterpart_hermiticity_residual)
        formula.append(f.astype(complex))
        numeric.append(n)
    summary = {
        "formulaVsNumericMax": worst,
        "matched": worst <= tol,
        "allReal": all_real,
        "metricHermiticityResidual": herm,
    }
    return FigureData("fig4", "beta0", grid, {"formula": np.array(formula), "numeric": np.array(numeric)}, summary)


FIGURES = {"fig1": figure1, "fig2": figure2, "fig3": figure3, "fig4": figure4}
