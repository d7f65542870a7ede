"""The linear Dyson map read as a generalized Bogoliubov transformation.

The adjoint action of eta = exp(2(lambda0 L0 + lambda+ L+ + lambda- L-)) mixes
the two Schwinger bosons with the unimodular matrix [[beta, alpha], [delta, gamma]]:

    alpha = 2 lambda+ S,  beta = cosh(theta) + lambda0 S,
    delta = 2 lambda- S,  gamma = cosh(theta) - lambda0 S,   S = sinh(theta)/theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linear_metric import LinearMetricParams
from .numerics import cosh_even, sinhc, tanhc
from .su2_core import QuadHamiltonianParams, residual_norm

__all__ = [
    "BogoliubovParams",
    "DiagonalizationCheck",
    "from_metric",
    "diagonalization_condition",
    "offdiagonal_mass",
]


@dataclass(frozen=True)
class BogoliubovParams:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    @property
    def determinant(self) -> complex:
        """beta gamma - alpha delta, which is 1 for every metric."""
        return self.beta * self.gamma - self.alpha * self.delta

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.beta, self.alpha], [self.delta, self.gamma]], dtype=complex)


def from_metric(m: LinearMetricParams) -> BogoliubovParams:
    s = sinhc(m.theta_sq)
    c = cosh_even(m.theta_sq)
    return BogoliubovParams(
        alpha=2.0 * m.lambda_plus * s,
        beta=c + m.lambda0 * s,
        gamma=c - m.lambda0 * s,
        delta=2.0 * m.lambda_minus * s,
    )


@dataclass(frozen=True)
class DiagonalizationCheck:
    """Residuals of Gamma0 Y -+ (a+ lam + b+ Gam)/(a+ Gam - b+ lam).

    ``status`` is "ok", "pole" (denominator vanishes, numerator does not) or
    "indeterminate" (both vanish). Residuals are nan unless status is "ok".
    """

    residual: float
    residual_plus: float
    residual_minus: float
    status: str

    def satisfied(self, tol: float = 1e-10) -> bool:
        if self.status == "indeterminate":
            return False
        return self.status == "ok" and abs(self.residual) <= tol


def diagonalization_condition(p: QuadHamiltonianParams, m: LinearMetricParams, *, eps: float = 1e-14) -> DiagonalizationCheck:
    """Evaluate the condition for the metric to diagonalize the linear part of H.

    The quotient is printed without a branch convention, so both signs are
    evaluated and ``residual`` is the one closer to zero. At the pole the
    numerator alone must vanish; for Gamma0 = 0 that reduces to a+ lam + b+ Gam = 0.
    """
    num = p.alphaP * m.lam + p.betaP * m.Gamma
    den = p.alphaP * m.Gamma - p.betaP * m.lam
    scale = max(abs(p.alphaP), abs(p.betaP), 1.0) * max(abs(m.lam), abs(m.Gamma), 1.0)
    lhs = m.Gamma0 * tanhc(m.theta_sq)
    if abs(den) <= eps * scale:
        status = "indeterminate" if abs(num) <= eps * scale else "pole"
        return DiagonalizationCheck(math.nan, math.nan, math.nan, status)
    r_plus = lhs - num / den
    r_minus = lhs + num / den
    best = r_plus if abs(r_plus) <= abs(r_minus) else r_minus
    return DiagonalizationCheck(best, r_plus, r_minus, "ok")


def offdiagonal_mass(h: np.ndarray) -> float:
    """Largest off-diagonal entry in absolute value."""
    h = np.asarray(h)
    return residual_norm(h - np.diag(np.diag(h)))
