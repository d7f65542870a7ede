"""Dyson maps with an exponent linear in the su(2) generators.

eta = exp(2 (lambda0 L0 + lambda+ L+ + lambda- L-)),
lambda0 = i Gamma0, lambda+- = lambda +- i Gamma.

All closed forms depend on theta only through theta^2 = 4 (lambda^2 + Gamma^2) - Gamma0^2,
so they are evaluated as even functions of theta (see ``numerics``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import brentq

from .numerics import cosh_even, expm, sinhc, tanhc
from .su2_core import QuadHamiltonianParams, SpinRepresentation

__all__ = [
    "is_hameva",
    "LinearMetricParams",
    "AdjointMatrix3",
    "GaussFactors",
    "ConstraintSystem",
    "MetricSolution",
    "FamilyResult",
    "GateViolation",
    "DomainError",
    "SingularGaussError",
    "metric_exponent",
    "dyson_operator",
    "adjoint_matrix",
    "gauss_decompose",
    "gauss_product",
    "constraint_coefficients",
    "solve_couplings",
    "solve_linear_family",
    "solve_quadratic_family",
    "quadratic_family_forced",
    "solve_gamma_zero_family",
    "solve_lambda_zero_family",
    "hermitian_alternative",
]


class GateViolation(ValueError):
    """The Hamiltonian lies outside the subclass a solver handles."""


class DomainError(ValueError):
    """A parameter lies outside the domain of a closed-form solution."""


class SingularGaussError(ArithmeticError):
    """cosh(theta) + lambda0 sinh(theta)/theta vanishes."""


@dataclass(frozen=True)
class LinearMetricParams:
    lam: float = 0.0
    Gamma: float = 0.0
    Gamma0: float = 0.0

    def __post_init__(self):
        for name in ("lam", "Gamma", "Gamma0"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @property
    def lambda0(self) -> complex:
        return 1j * self.Gamma0

    @property
    def lambda_plus(self) -> complex:
        return complex(self.lam, self.Gamma)

    @property
    def lambda_minus(self) -> complex:
        return complex(self.lam, -self.Gamma)

    @property
    def theta_sq(self) -> float:
        return 4.0 * (self.lam**2 + self.Gamma**2) - self.Gamma0**2

    @property
    def theta(self) -> complex:
        """Principal square root of theta^2 (imaginary when theta^2 < 0)."""
        return cmath.sqrt(self.theta_sq)

    @property
    def Y(self) -> float:
        return tanhc(self.theta_sq)

    @property
    def is_positive(self) -> bool:
        return self.theta_sq >= 0.0

    @property
    def is_hermitian(self) -> bool:
        return self.Gamma0 == 0.0

    def scaled(self, t: float) -> "LinearMetricParams":
        return LinearMetricParams(t * self.lam, t * self.Gamma, t * self.Gamma0)

    def as_dict(self) -> dict[str, float]:
        return {"lambda": self.lam, "Gamma": self.Gamma, "Gamma0": self.Gamma0}


def metric_exponent(m: LinearMetricParams, rep: SpinRepresentation) -> np.ndarray:
    return 2.0 * (m.lambda0 * rep.L0 + m.lambda_plus * rep.Lplus + m.lambda_minus * rep.Lminus)


def dyson_operator(m: LinearMetricParams, rep: SpinRepresentation) -> np.ndarray:
    return expm(metric_exponent(m, rep))


# ---------------------------------------------------------------- adjoint action


@dataclass(frozen=True, eq=False)
class AdjointMatrix3:
    """eta L_i eta^-1 = sum_j b[i, j] L_j with (L_0, L_1, L_2) = (L0, L+, L-)."""

    b: np.ndarray

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.b))

    def act(self, rep: SpinRepresentation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        gens = (rep.L0, rep.Lplus, rep.Lminus)
        return tuple(sum(self.b[i, j] * gens[j] for j in range(3)) for i in range(3))


def adjoint_matrix(m: LinearMetricParams) -> AdjointMatrix3:
    s = sinhc(m.theta_sq)
    c = cosh_even(m.theta_sq)
    l0, lp, lm = m.lambda0, m.lambda_plus, m.lambda_minus
    cp = c + l0 * s
    cm = c - l0 * s
    b = np.array(
        [
            [1 + 8 * lp * lm * s * s, -2 * lp * s * cp, 2 * lm * s * cm],
            [-4 * lm * s * cp, cp * cp, -((2 * lm * s) ** 2)],
            [4 * lp * s * cm, -((2 * lp * s) ** 2), cm * cm],
        ],
        dtype=complex,
    )
    b.flags.writeable = False
    return AdjointMatrix3(b)


# ---------------------------------------------------------------- Gauss factors


@dataclass(frozen=True)
class GaussFactors:
    """eta = exp(2 kappa- L-) exp(2 kappa0 L0) exp(2 kappa+ L+)."""

    kappa0: complex
    kappa_plus: complex
    kappa_minus: complex


def gauss_decompose(m: LinearMetricParams, *, eps: float = 1e-300) -> GaussFactors:
    s = sinhc(m.theta_sq)
    c = cosh_even(m.theta_sq)
    d = c + m.lambda0 * s
    if abs(d) <= eps:
        raise SingularGaussError("cosh(theta) + lambda0 sinh(theta)/theta vanishes")
    return GaussFactors(
        kappa0=cmath.log(d),
        kappa_plus=m.lambda_plus * s / d,
        kappa_minus=m.lambda_minus * s / d,
    )


def gauss_product(g: GaussFactors, rep: SpinRepresentation) -> np.ndarray:
    return (
        expm(2 * g.kappa_minus * rep.Lminus)
        @ expm(2 * g.kappa0 * rep.L0)
        @ expm(2 * g.kappa_plus * rep.Lplus)
    )


# ---------------------------------------------------------------- constraint system


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Three quartics sum_k xi[i, k] Y^k = 0 (i = 1, 2, 3 stored as rows 0..2)."""

    xi: np.ndarray

    def evaluate(self, Y: float) -> np.ndarray:
        return self.xi @ (Y ** np.arange(5))

    def residual(self, Y: float) -> float:
        """Largest polynomial value, relative to the size of its largest term."""
        terms = self.xi * (Y ** np.arange(5))
        vals = np.abs(terms.sum(axis=1))
        scale = np.maximum(1.0, np.abs(terms).max(axis=1))
        return float(np.max(vals / scale))


def constraint_coefficients(p: QuadHamiltonianParams, m: LinearMetricParams) -> ConstraintSystem:
    """Coefficients of the Hermiticity polynomials in Y.

    Row 0 collects the imaginary part of the L0 coefficient of eta H eta^-1;
    rows 1 and 2 the real and imaginary parts of the mismatch between the
    L+ and L- coefficients.
    """
    lam, G, G0 = m.lam, m.Gamma, m.Gamma0
    b0, ap, bp = p.beta0, p.alphaP, p.betaP
    a00, ap0, bp0 = p.alpha00, p.alphaP0, p.betaP0
    app, bpp, apm = p.alphaPP, p.betaPP, p.alphaPM
    r2 = G**2 + lam**2
    x1 = [
        b0,
        4 * G * (2 * ap - ap0) - 4 * lam * (2 * bp - bp0),
        2 * G0 * (2 * lam * ap0 + 2 * G * bp0 - 4 * ap * lam - 4 * bp * G + b0 * G0),
        4 * (4 * r2 - G0**2) * (G * (ap0 - 2 * ap) - lam * bp0 + 2 * bp * lam),
        (G0**2 - 4 * r2) * (4 * G0 * (lam * ap0 + G * bp0 - 2 * ap * lam - 2 * bp * G) + b0 * (4 * r2 + G0**2)),
    ]
    x2 = [
        ap0,
        -2 * (G0 * bp0 + 2 * lam * (a00 - 2 * apm + 2 * app) + 4 * G * bpp),
        4 * (6 * lam * (lam * ap0 + G * bp0) + G0 * (G * (a00 - 2 * (apm + 3 * app)) + 6 * lam * bpp)),
        -4 * lam * a00 * (4 * r2 + G0**2)
        - 24 * G0 * r2 * bp0
        - 2 * G0**3 * bp0
        + 32 * (G**2 * lam * (apm + 3 * app) + lam**3 * (apm - app) + G**3 * bpp - 3 * G * lam**2 * bpp)
        + 8 * G0**2 * (lam * apm + 3 * lam * app + 3 * G * bpp),
        16 * r2 * ((lam - G) * (G + lam) * ap0 + 2 * G * lam * bp0)
        + 24 * G * G0**2 * (lam * bp0 - G * ap0)
        - G0**4 * ap0
        + 16 * G0 * (G**3 * (a00 - 2 * apm + 2 * app) + G * lam**2 * (a00 - 2 * (apm + 3 * app)) + 2 * (lam**3 - 3 * G**2 * lam) * bpp)
        + 4 * G0**3 * (G * (a00 - 2 * apm + 2 * app) - 2 * lam * bpp),
    ]
    x3 = [
        bp0,
        -4 * G * a00 + 2 * G0 * ap0 + 8 * G * (apm + app) - 8 * lam * bpp,
        24 * G * (lam * ap0 + G * bp0) - 4 * G0 * (lam * (a00 - 2 * apm + 6 * app) + 6 * G * bpp),
        2
        * (
            12 * G0 * r2 * ap0
            + G0**3 * ap0
            - 8 * G**3 * (a00 - 2 * (apm + app))
            - 8 * G * lam**2 * (a00 - 2 * apm + 6 * app)
            - 2 * G0**2 * G * (a00 - 2 * apm + 6 * app)
            + 4 * lam * (3 * (G0**2 - 4 * G**2) + 4 * lam**2) * bpp
        ),
        4
        * (
            8 * G * lam * r2 * ap0
            + 6 * G * G0**2 * lam * ap0
            - 4 * G0 * (G**2 * lam * (a00 - 2 * apm + 6 * app) + lam**3 * (a00 - 2 * (apm + app)) + 2 * G**3 * bpp - 6 * G * lam**2 * bpp)
            + G0**3 * (-lam * a00 + 2 * lam * (apm + app) + 2 * G * bpp)
        )
        - (24 * G0**2 * lam**2 + G0**4 + 16 * lam**4 - 16 * G**4) * bp0,
    ]
    xi = np.array([x1, x2, x3], dtype=float)
    xi.flags.writeable = False
    return ConstraintSystem(xi)


def _equation_values(p: QuadHamiltonianParams, m: LinearMetricParams) -> np.ndarray:
    return constraint_coefficients(p, m).evaluate(m.Y)


def solve_couplings(
    p: QuadHamiltonianParams,
    m: LinearMetricParams,
    names: Sequence[str],
    equations: Sequence[int] | None = None,
) -> QuadHamiltonianParams:
    """Replace the named couplings so that the constraint equations hold at m.

    The constraints are linear in the Hamiltonian couplings, so this is a
    small linear solve. By default the equations used are the ones the named
    couplings enter; with two couplings among (alpha00, betaPP) that is rows 1, 2.
    """
    names = tuple(names)
    if equations is None:
        equations = (1, 2) if len(names) == 2 else tuple(range(len(names)))
    equations = tuple(equations)
    if len(equations) != len(names):
        raise ValueError("need as many equations as unknown couplings")
    base = replace(p, **{n: 0.0 for n in names})
    f0 = _equation_values(base, m)[list(equations)]
    cols = []
    for n in names:
        e = replace(base, **{n: 1.0})
        cols.append(_equation_values(e, m)[list(equations)] - f0)
    a = np.array(cols).T
    if np.linalg.cond(a) > 1e12:
        raise DomainError(f"couplings {names} are not determined by the constraints at this metric")
    x = np.linalg.solve(a, -f0)
    return replace(base, **{n: float(v) for n, v in zip(names, x)})


# ---------------------------------------------------------------- solutions


@dataclass(frozen=True)
class MetricSolution:
    """A metric together with the Hamiltonian it maps to a Hermitian operator."""

    family: str
    branch: str
    metric: LinearMetricParams
    hamiltonian: QuadHamiltonianParams
    theta: float
    constraint_residual: float
    forced: dict = field(default_factory=dict)
    ill_conditioned: bool = False

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "branch": self.branch,
            "metric": self.metric.as_dict(),
            "theta": self.theta,
            "thetaSq": self.metric.theta_sq,
            "Y": self.metric.Y,
            "positive": self.metric.is_positive,
            "hermitianMetric": self.metric.is_hermitian,
            "hamiltonian": self.hamiltonian.as_dict(),
            "forced": dict(self.forced),
            "constraintResidual": self.constraint_residual,
            "illConditioned": self.ill_conditioned,
        }


class FamilyResult(Sequence):
    """Solutions of one family, plus diagnostics explaining empty results."""

    def __init__(self, solutions=(), diagnostics=()):
        self.solutions = tuple(solutions)
        self.diagnostics = tuple(diagnostics)

    def __len__(self) -> int:
        return len(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]

    def __iter__(self) -> Iterator[MetricSolution]:
        return iter(self.solutions)

    def __repr__(self) -> str:
        return f"FamilyResult({len(self.solutions)} solutions, diagnostics={list(self.diagnostics)})"


_BRANCH_ORDER = {"trivial": 0, "+": 1, "-": 2, "special+": 3, "special-": 4}


def _sorted(solutions):
    return sorted(solutions, key=lambda s: (_BRANCH_ORDER.get(s.branch, 9), s.theta))


def _make_solution(family, branch, metric, ham, forced=(), tol=1e-9, theta_warn=20.0):
    cs = constraint_coefficients(ham, metric)
    theta = abs(metric.theta)
    return MetricSolution(
        family=family,
        branch=branch,
        metric=metric,
        hamiltonian=ham,
        theta=float(theta),
        constraint_residual=cs.residual(metric.Y),
        forced=dict(forced),
        ill_conditioned=theta > theta_warn,
    )


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _is_zero_hamiltonian(p: QuadHamiltonianParams) -> bool:
    return not np.any(p.as_array())


def is_hameva(p: QuadHamiltonianParams) -> bool:
    """H = i b0 L0 + a+ (L+ + L-) + a00 L0^2 with b0 and a00 nonzero.

    No metric of the linear ansatz Hermitizes it, so the linear solver reports
    it as infeasible instead of as a gate violation.
    """
    rest = (p.betaP, p.alphaP0, p.betaP0, p.alphaPP, p.betaPP, p.alphaPM)
    return p.beta0 != 0.0 and p.alpha00 != 0.0 and not any(rest)


# ---------------------------------------------------------------- linear family


def solve_linear_family(
    p: QuadHamiltonianParams,
    direction: LinearMetricParams,
    *,
    theta_max: float = 50.0,
    grid_points: int = 4000,
    tol: float = 1e-9,
    gate_tol: float = 1e-12,
) -> FamilyResult:
    """Scale the metric vector ``direction`` so that eta Hermitizes a linear H.

    The constraint reads tanh(theta)/theta = beta0 / (Delta - 4 (a+ Gamma - b+ lambda))
    with Delta = +-sqrt(16 (b+ lambda - a+ Gamma)^2 + 8 b0 Gamma0 (a+ lambda + b+ Gamma)
    - b0^2 theta'^2), theta'^2 = Gamma0^2 + 4 (lambda^2 + Gamma^2). Along the ray
    t * direction both Delta and the offset scale with t, so the constraint is
    Y(t^2 theta_hat^2) * t * D_hat = beta0, solved by scanning theta on a log grid
    in (0, theta_max] and refining each sign change with Brent's method.
    """
    if is_hameva(p):
        return FamilyResult([], ["L0^2 term with alphaPM = 0: the constraint system is inconsistent", "no consistent solution"])
    quad = {k: getattr(p, k) for k in ("alphaP0", "betaP0", "alphaPP", "betaPP")}
    if any(v != 0.0 for v in quad.values()):
        raise GateViolation(f"linear family needs alphaP0 = betaP0 = alphaPP = betaPP = 0, got {quad}")
    if not _close(p.alphaPM, p.alpha00 / 2.0, gate_tol):
        raise GateViolation(f"linear family needs alphaPM = alpha00/2, got alphaPM={p.alphaPM}, alpha00={p.alpha00}")
    family = "linear"
    if p.beta0 == 0.0:
        return FamilyResult([_make_solution(family, "trivial", LinearMetricParams(), p)], ["beta0 = 0: H is Hermitian, identity metric"])
    lam, G, G0 = direction.lam, direction.Gamma, direction.Gamma0
    if lam == G == G0 == 0.0:
        raise DomainError("direction must be a nonzero metric vector")
    ap, bp, b0 = p.alphaP, p.betaP, p.beta0
    radicand = (
        16 * (bp * lam - ap * G) ** 2
        + 8 * b0 * G0 * (ap * lam + bp * G)
        - b0**2 * (G0**2 + 4 * (lam**2 + G**2))
    )
    diagnostics = []
    if radicand < 0:
        diagnostics.append("Delta is imaginary along this direction: no real root")
        if abs(b0) > 2 * math.hypot(ap, bp):
            diagnostics.append("|beta0| exceeds 2 sqrt(alphaP^2 + betaP^2): spectrum is not real")
        return FamilyResult([], diagnostics)
    offset = 4 * (ap * G - bp * lam)
    th2_hat = direction.theta_sq
    th_hat = math.sqrt(abs(th2_hat))
    branches = [("+", math.sqrt(radicand) - offset), ("-", -math.sqrt(radicand) - offset)]
    if radicand == 0.0:
        branches = branches[:1]
    found = []
    for tag, d_hat in branches:
        if d_hat == 0.0:
            continue
        for t in _scan_scale(b0, d_hat, th2_hat, th_hat, theta_max, grid_points):
            metric = direction.scaled(t)
            sol = _make_solution(family, tag, metric, p)
            if sol.constraint_residual <= tol:
                found.append(sol)
    if not found:
        diagnostics.append("no root of the scale equation satisfies the constraints")
        if abs(b0) > 2 * math.hypot(ap, bp):
            diagnostics.append("|beta0| exceeds 2 sqrt(alphaP^2 + betaP^2): spectrum is not real")
    return FamilyResult(_sorted(found), diagnostics)


def _scan_scale(b0, d_hat, th2_hat, th_hat, theta_max, grid_points):
    """Positive scales t with Y(t^2 th2_hat) t d_hat = b0."""
    if th2_hat == 0.0:
        # Y = 1 identically along the ray.
        t = b0 / d_hat
        return [t] if t > 0 else []

    def f(t):
        return tanhc(t * t * th2_hat) * t * d_hat - b0

    thetas = np.geomspace(1e-8, theta_max, grid_points)
    ts = thetas / th_hat
    vals = np.array([f(t) for t in ts])
    roots = []
    scale = 1.0 + abs(b0)
    for i in range(len(ts) - 1):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(ts[i])
            continue
        if fa * fb < 0:
            r = brentq(f, ts[i], ts[i + 1], xtol=1e-13 / th_hat, rtol=4 * np.finfo(float).eps, maxiter=200)
            # Sign changes across poles of tan (imaginary theta) are not roots.
            if abs(f(r)) <= 1e-9 * scale:
                roots.append(r)
    if vals[-1] == 0.0:
        roots.append(ts[-1])
    return roots


def hermitian_alternative(p: QuadHamiltonianParams, **kwargs) -> FamilyResult:
    """A Gamma0 = 0 metric for a linear H, along the direction sign(b0) (betaP, -alphaP, 0).

    Along that direction the Delta radicand is 16 (a+^2 + b+^2) - 4 b0^2, so a real
    root exists exactly inside the reality bound |b0| <= 2 sqrt(a+^2 + b+^2). The
    sign makes the scale positive for either sign of beta0.
    """
    if p.alphaP == p.betaP == 0.0:
        raise DomainError("alphaP = betaP = 0: no preferred direction")
    s = -1.0 if p.beta0 < 0 else 1.0
    return solve_linear_family(p, LinearMetricParams(s * p.betaP, -s * p.alphaP, 0.0), **kwargs)


# ---------------------------------------------------------------- quadratic family, Gamma0 = 0


def quadratic_family_forced(p: QuadHamiltonianParams, nu: float) -> tuple[float, float]:
    """alpha00 and betaPP required for a metric with Gamma0 = 0, Gamma = nu lambda."""
    b0, ap, bp = p.beta0, p.alphaP, p.betaP
    ap0, bp0, app, apm = p.alphaP0, p.betaP0, p.alphaPP, p.alphaPM
    if nu * nu == 1.0:
        raise DomainError("nu^2 = 1 is singular for the quadratic family")
    if b0 == 0.0:
        raise DomainError("beta0 = 0: the closed forms for alpha00 and betaPP are 0/0")
    alpha00 = (
        2 * apm
        + (2 * ap - ap0) * (ap0 - 2 * bp0 * (nu - 1)) / (2 * b0 * (nu - 1))
        + b0 * (ap0 + bp0 * nu) / (2 * bp - bp0 + (ap0 - 2 * ap) * nu)
        + 2 * app * (nu**2 + 1) / (nu**2 - 1)
        + (ap0 * (ap0 - 4 * (bp - bp0)) - (ap0**2 + 2 * bp0 * (bp0 - 2 * bp)) * nu - 2 * ap * (ap0 + 2 * bp0 - ap0 * nu))
        / (2 * b0 * (nu**2 - 1))
    )
    betaPP = ((bp0 - ap0 * nu) * (bp0 - 2 * bp + (2 * ap - ap0) * nu) - 4 * app * b0 * nu) / (2 * b0 * (nu**2 - 1))
    return float(alpha00), float(betaPP)


def _check_mode(mode: str) -> None:
    if mode not in ("validate", "project"):
        raise ValueError("mode must be 'validate' or 'project'")


def _apply_forced(p, forced, mode, tol, diagnostics, label):
    """Return the Hamiltonian a solution applies to, or None if p is inconsistent."""
    if mode == "project":
        return replace(p, **forced)
    bad = {k: (getattr(p, k), v) for k, v in forced.items() if not _close(getattr(p, k), v, tol)}
    if bad:
        msg = ", ".join(f"{k} forced to {v:.12g} but H has {h:.12g}" for k, (h, v) in bad.items())
        diagnostics.append(f"{label}: {msg}")
        return None
    return p


def solve_quadratic_family(
    p: QuadHamiltonianParams,
    nu: float,
    *,
    mode: str = "validate",
    tol: float = 1e-9,
) -> FamilyResult:
    """Metrics with Gamma0 = 0 and Gamma = nu lambda for the full quadratic H.

    tanh(theta) = (N +- Dbar) / (b0 sqrt(1 + nu^2)), theta = 2 lambda sqrt(1 + nu^2),
    N = 2 b+ - b+0 - (2 a+ - a+0) nu, Dbar = sqrt(N^2 - b0^2 (1 + nu^2)).
    The two roots multiply to 1, so at most one of them is a tanh value; the
    other is the spurious coth root and is discarded. alpha00 and betaPP are
    then fixed: in ``validate`` mode p must already carry those values, in
    ``project`` mode they are substituted.
    """
    _check_mode(mode)
    nu = float(nu)
    family = "quadratic-gamma0zero"
    if _is_zero_hamiltonian(p):
        return FamilyResult([], ["degenerate: H = 0, every metric is a solution"])
    a00_f, bpp_f = quadratic_family_forced(p, nu)
    forced = {"alpha00": a00_f, "betaPP": bpp_f}
    r = math.sqrt(1 + nu * nu)
    n = 2 * p.betaP - p.betaP0 - (2 * p.alphaP - p.alphaP0) * nu
    disc = n * n - p.beta0**2 * (1 + nu * nu)
    diagnostics = []
    ham = _apply_forced(p, forced, mode, tol, diagnostics, "forced couplings")
    if ham is None:
        return FamilyResult([], diagnostics + ["no consistent solution"])
    if disc < 0:
        return FamilyResult([], ["Dbar is imaginary: no real tanh(theta)", "no consistent solution"])
    found = []
    for tag, sgn in (("+", 1.0), ("-", -1.0)):
        tt = (n + sgn * math.sqrt(disc)) / (p.beta0 * r)
        if not abs(tt) < 1.0:
            diagnostics.append(f"branch {tag}: |tanh(theta)| = {abs(tt):.6g} >= 1 (coth root)")
            continue
        lam = math.atanh(tt) / (2 * r)
        metric = LinearMetricParams(lam, nu * lam, 0.0)
        sol = _make_solution(family, tag, metric, ham, forced)
        if sol.constraint_residual <= tol:
            found.append(sol)
        else:
            diagnostics.append(f"branch {tag}: constraint residual {sol.constraint_residual:.3g} above tolerance")
        if disc == 0.0:
            break
    if not found:
        diagnostics.append("no consistent solution")
    return FamilyResult(_sorted(found), diagnostics)


# ---------------------------------------------------------------- Gamma0 != 0 families


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not abs(nu) < 2.0:
        raise DomainError("|nu| must be below 2 so that theta is real")
    return nu


def _u_roots(num0: float, disc: float, den: float):
    """Roots u = (num0 +- sqrt(disc)) / den of a quadratic, tagged by the sign."""
    if disc < 0:
        return []
    if den == 0.0:
        return []
    sq = math.sqrt(disc)
    out = [("+", (num0 + sq) / den)]
    if sq != 0.0:
        out.append(("-", (num0 - sq) / den))
    return out


def _gamma_zero_forced(p: QuadHamiltonianParams, nu: float, u: float) -> dict[str, float]:
    """alpha00 and betaPP on the Gamma = 0, Gamma0 = nu lambda branch (u = tanh(theta)/sqrt(4 - nu^2))."""
    ap0, bp0, app, apm = p.alphaP0, p.betaP0, p.alphaPP, p.alphaPM
    q = 1 + u * u * (4 + nu * nu)
    bpp = nu * (ap0 * q - 16 * u * app) / (8 * (1 - u * u * nu * nu)) + bp0 * q / (8 * u * (1 - u * u * nu * nu))
    a00 = (
        2 * apm
        + ap0 / (8 * u)
        + u * ap0 / 2
        - (bp0 + 4 * u * u * bp0 - 8 * u * bpp) / (8 * u * u * nu)
        - (bp0 - 8 * u * bpp) * nu / 8
        + ap0 * u * nu * nu / 8
        + 4 * u * (ap0 - u * bp0 * nu) / q
    )
    return {"alpha00": float(a00), "betaPP": float(bpp)}


def _lambda_zero_forced(p: QuadHamiltonianParams, nu: float, u: float) -> dict[str, float]:
    """alpha00 and betaPP on the lambda = 0, Gamma0 = nu Gamma branch."""
    ap0, bp0, app, apm = p.alphaP0, p.betaP0, p.alphaPP, p.alphaPM
    q = 1 + u * u * (4 + nu * nu)
    bpp = nu * (16 * u * app + bp0 * q) / (8 * (u * u * nu * nu - 1)) - ap0 * q / (8 * u * (u * u * nu * nu - 1))
    a00 = (
        2 * (apm - app)
        - bp0 / (4 * u)
        + ap0 * nu / 4
        + ((1 + 2 * u * u) * (ap0 - bp0) - 8 * u * app) / (4 * u * (u * nu - 1))
        + ((1 + 2 * u * u) * (ap0 + bp0) + 8 * u * app) / (4 * u * (u * nu + 1))
        + 4 * u * (bp0 + u * ap0 * nu) / q
    )
    return {"alpha00": float(a00), "betaPP": float(bpp)}


def _special_forced(p: QuadHamiltonianParams, nu: float, sgn: float, which: str) -> dict[str, float]:
    """alphaP, alphaPP, betaPP on the branch tanh(theta) = sgn sqrt(4 - nu^2)/nu."""
    b0, bp, a00 = p.beta0, p.betaP, p.alpha00
    ap0, bp0, apm = p.alphaP0, p.betaP0, p.alphaPM
    w = (nu * nu + 2) / (4 * nu)
    g = (4 + 12 * nu**2 + nu**4) / (8 * nu * (2 + nu**2))
    h = (2 + nu * nu) / (8 * nu)
    if which == "gamma-zero":
        ap = ap0 / 2 + b0 * w - sgn * (bp - bp0 / 2)
        app = sgn * (ap0 + sgn * bp0) * h
        bpp = sgn * (a00 / 2 - apm) - (ap0 - sgn * bp0) * g
    else:
        ap = ap0 / 2 + sgn * (bp - bp0 / 2 - b0 * w)
        app = (ap0 - sgn * bp0) * h
        bpp = -sgn * (a00 / 2 - apm - (ap0 + sgn * bp0) * g)
    return {"alphaP": float(ap), "alphaPP": float(app), "betaPP": float(bpp)}


def _gamma0_family(p, nu, mode, tol, which):
    _check_mode(mode)
    nu = _check_nu(nu)
    family = "appendix-" + which
    if _is_zero_hamiltonian(p):
        return FamilyResult([], ["degenerate: H = 0, every metric is a solution"])
    b0, ap, bp = p.beta0, p.alphaP, p.betaP
    ap0, bp0 = p.alphaP0, p.betaP0
    root = math.sqrt(4 - nu * nu)
    diagnostics = []
    found = []

    def metric_for(tanh_theta):
        x = math.atanh(tanh_theta) / root
        if which == "gamma-zero":
            return LinearMetricParams(x, 0.0, nu * x)
        return LinearMetricParams(0.0, x, nu * x)

    # Quotient solutions for u = tanh(theta) / sqrt(4 - nu^2).
    if which == "gamma-zero":
        k = bp0 - 2 * bp
        den = 2 * (4 * (2 * ap - ap0) * nu - b0 * (nu * nu + 4))
        disc = 16 * k * k + 16 * b0 * (2 * ap - ap0) * nu - 4 * b0 * b0 * (nu * nu + 4)
        num0 = 4 * k
    else:
        k = ap0 - 2 * ap
        dn = 4 * (bp0 - 2 * bp) * nu + b0 * (nu * nu + 4)
        den = 2 * dn
        disc = 16 * k * k - 4 * b0 * dn
        num0 = 4 * k
    if den == 0.0 and num0 == 0.0 and b0 == 0.0:
        diagnostics.append("degenerate: the u-quadratic vanishes identically")
    elif disc < 0:
        diagnostics.append("Delta is imaginary: no real u")
    for tag, u in _u_roots(num0, disc, den):
        tt = u * root
        if not abs(tt) < 1.0 or u == 0.0:
            diagnostics.append(f"branch {tag}: |tanh(theta)| = {abs(tt):.6g} outside (0, 1)")
            continue
        metric = metric_for(tt)
        if nu == 0.0:
            forced_ham = solve_couplings(p, metric, ("alpha00", "betaPP"))
            forced = {"alpha00": forced_ham.alpha00, "betaPP": forced_ham.betaPP}
        elif which == "gamma-zero":
            forced = _gamma_zero_forced(p, nu, u)
        else:
            forced = _lambda_zero_forced(p, nu, u)
        ham = _apply_forced(p, forced, mode, tol, diagnostics, f"branch {tag}")
        if ham is None:
            continue
        sol = _make_solution(family, tag, metric, ham, forced)
        if sol.constraint_residual <= tol:
            found.append(sol)
        else:
            diagnostics.append(f"branch {tag}: constraint residual {sol.constraint_residual:.3g} above tolerance")

    # Special solutions tanh(theta) = +- sqrt(4 - nu^2) / nu, only real for nu^2 > 2.
    if nu != 0.0:
        for tag, sgn in (("special+", 1.0), ("special-", -1.0)):
            tt = sgn * root / nu
            if not abs(tt) < 1.0:
                continue
            forced = _special_forced(p, nu, sgn, which)
            ham = _apply_forced(p, forced, mode, tol, diagnostics, f"branch {tag}")
            if ham is None:
                continue
            sol = _make_solution(family, tag, metric_for(tt), ham, forced)
            if sol.constraint_residual <= tol:
                found.append(sol)
            else:
                diagnostics.append(f"branch {tag}: constraint residual {sol.constraint_residual:.3g} above tolerance")
    if not found:
        diagnostics.append("no consistent solution")
    return FamilyResult(_sorted(found), diagnostics)


def solve_gamma_zero_family(p: QuadHamiltonianParams, nu: float, *, mode: str = "validate", tol: float = 1e-9) -> FamilyResult:
    """Metrics with Gamma = 0 and Gamma0 = nu lambda (theta = lambda sqrt(4 - nu^2)).

    u = tanh(theta)/sqrt(4 - nu^2) solves
    u = (4 (b+0 - 2 b+) +- Delta) / (2 (4 (2 a+ - a+0) nu - b0 (nu^2 + 4))),
    Delta^2 = 16 (b+0 - 2 b+)^2 + 16 b0 (2 a+ - a+0) nu - 4 b0^2 (nu^2 + 4),
    with alpha00 and betaPP forced. A second set has tanh(theta) = +-sqrt(4 - nu^2)/nu
    with alphaP, alphaPP, betaPP forced instead.
    """
    return _gamma0_family(p, nu, mode, tol, "gamma-zero")


def solve_lambda_zero_family(p: QuadHamiltonianParams, nu: float, *, mode: str = "validate", tol: float = 1e-9) -> FamilyResult:
    """Metrics with lambda = 0 and Gamma0 = nu Gamma (theta = Gamma sqrt(4 - nu^2)).

    u = (4 (a+0 - 2 a+) +- Delta) / (2 (4 (b+0 - 2 b+) nu + b0 (nu^2 + 4))),
    Delta^2 = 16 (a+0 - 2 a+)^2 - 4 b0 (4 (b+0 - 2 b+) nu + b0 (nu^2 + 4)).
    """
    return _gamma0_family(p, nu, mode, tol, "lambda-zero")
