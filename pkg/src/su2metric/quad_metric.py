"""Dyson maps with an exponent quadratic in the generators.

eta = exp(zeta- L-^2) exp(zeta0 L0^2) exp(zeta+ L+^2)

The adjoint actions of eta on L0, L+, L- have closed forms valid in every
representation. The Hermiticity constraints on the Hamiltonian couplings, on
the other hand, were worked out for spin 1 only and are refused elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .counterpart import PseudoHermiticityReport, verify_dyson_map
from .linear_metric import DomainError
from .numerics import expm
from .spectra import eigenvalues
from .su2_core import (
    QuadHamiltonianParams,
    SpinRepresentation,
    build_hamiltonian,
    build_spin_rep,
)

__all__ = [
    "QuadMetricParams",
    "QuadConstraintSolution",
    "quad_dyson_operator",
    "quad_dyson_inverse",
    "quad_adjoint_action",
    "quad_conjugate",
    "zeta_minus_from_plus",
    "zeta_minus_from_plus_printed",
    "solve_quad_constraints_spin1",
    "figure4_hamiltonian_params",
    "figure4_hamiltonian",
    "figure4_hamiltonian_printed",
    "figure4_metric",
    "figure4_eigenvalues",
    "figure4_numeric_eigenvalues",
]

ZETA_PLUS_MAX = 1.0 / math.sqrt(2.0)
SPIN1_TWO_L = 2


@dataclass(frozen=True)
class QuadMetricParams:
    """zeta0 real; zeta+ and zeta- complex.

    The symmetric choice zeta+- = zeta1 +- i zeta2 makes eta Hermitian. The
    unconstrained mode allows independent zeta+ and zeta-.
    """

    zeta0: float = 0.0
    zeta_plus: complex = 0.0
    zeta_minus: complex = 0.0

    def __post_init__(self):
        z0 = float(self.zeta0)
        zp, zm = complex(self.zeta_plus), complex(self.zeta_minus)
        if not all(map(math.isfinite, (z0, zp.real, zp.imag, zm.real, zm.imag))):
            raise ValueError("metric parameters must be finite")
        object.__setattr__(self, "zeta0", z0)
        object.__setattr__(self, "zeta_plus", zp)
        object.__setattr__(self, "zeta_minus", zm)

    @classmethod
    def symmetric(cls, zeta0: float, zeta1: float, zeta2: float) -> "QuadMetricParams":
        return cls(zeta0, complex(zeta1, zeta2), complex(zeta1, -zeta2))

    @classmethod
    def unconstrained(cls, zeta0: float, zeta_plus: complex, zeta_minus: complex) -> "QuadMetricParams":
        return cls(zeta0, zeta_plus, zeta_minus)

    @property
    def zeta1(self) -> float:
        return 0.5 * (self.zeta_plus + self.zeta_minus).real

    @property
    def zeta2(self) -> float:
        return 0.5 * (self.zeta_plus - self.zeta_minus).imag

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return abs(self.zeta_minus - self.zeta_plus.conjugate()) <= tol

    def as_dict(self) -> dict:
        return {
            "zeta0": self.zeta0,
            "zetaPlus": [self.zeta_plus.real, self.zeta_plus.imag],
            "zetaMinus": [self.zeta_minus.real, self.zeta_minus.imag],
        }


def _factors(q: QuadMetricParams, rep: SpinRepresentation, sign: float):
    Lp, Lm = rep.Lplus, rep.Lminus
    em = expm(sign * q.zeta_minus * (Lm @ Lm))
    e0 = np.diag(np.exp(sign * q.zeta0 * rep.m_values**2)).astype(complex)
    ep = expm(sign * q.zeta_plus * (Lp @ Lp))
    return em, e0, ep


def quad_dyson_operator(q: QuadMetricParams, rep: SpinRepresentation) -> np.ndarray:
    em, e0, ep = _factors(q, rep, 1.0)
    return em @ e0 @ ep


def quad_dyson_inverse(q: QuadMetricParams, rep: SpinRepresentation) -> np.ndarray:
    """Exact inverse as the reversed product of the inverted factors."""
    em, e0, ep = _factors(q, rep, -1.0)
    return ep @ e0 @ em


_GENERATOR_ALIASES = {
    "L0": "L0",
    "Lz": "L0",
    "L+": "L+",
    "Lplus": "L+",
    "L-": "L-",
    "Lminus": "L-",
}


def quad_adjoint_action(q: QuadMetricParams, generator: str, rep: SpinRepresentation) -> np.ndarray:
    """eta L eta^-1 for L in {L0, L+, L-} from the representation-independent closed forms.

    With c0 = L0 + 2 z- L-^2, c1 = L+ - 2 z- L- - 4 z- L0 L- - 4 z-^2 L-^3 and
    X = e^{z0} c1 exp(2 z0 c0):
      eta L0 eta^-1 = c0 - 2 z+ X^2
      eta L+ eta^-1 = X
      eta L- eta^-1 = e^{-z0} exp(-2 z0 c0) L- + 2 z+ X + 4 z+ X c0 - 4 z+^2 X^3
    """
    try:
        g = _GENERATOR_ALIASES[generator]
    except KeyError:
        raise ValueError(f"unknown generator {generator!r}") from None
    L0, Lp, Lm = rep.L0, rep.Lplus, rep.Lminus
    z0, zp, zm = q.zeta0, q.zeta_plus, q.zeta_minus
    c0 = L0 + 2 * zm * (Lm @ Lm)
    c1 = Lp - 2 * zm * Lm - 4 * zm * (L0 @ Lm) - 4 * zm**2 * (Lm @ Lm @ Lm)
    x = math.exp(z0) * (c1 @ expm(2 * z0 * c0))
    if g == "L0":
        return c0 - 2 * zp * (x @ x)
    if g == "L+":
        return x
    return math.exp(-z0) * (expm(-2 * z0 * c0) @ Lm) + 2 * zp * x + 4 * zp * (x @ c0) - 4 * zp**2 * (x @ x @ x)


def quad_conjugate(h: np.ndarray, q: QuadMetricParams, rep: SpinRepresentation) -> np.ndarray:
    """eta H eta^-1 from the exponential factors."""
    return quad_dyson_operator(q, rep) @ np.asarray(h, dtype=complex) @ quad_dyson_inverse(q, rep)


# ---------------------------------------------------------------- spin-1 constraints


def _check_zeta_plus(zeta_plus: float) -> float:
    if isinstance(zeta_plus, complex):
        if zeta_plus.imag != 0.0:
            raise DomainError("zeta+ must be real for the spin-1 constraints")
        zeta_plus = zeta_plus.real
    zp = float(zeta_plus)
    if not math.isfinite(zp) or abs(zp) > ZETA_PLUS_MAX:
        raise DomainError(f"|zeta+| must not exceed 1/sqrt(2), got {zeta_plus!r}")
    return zp


def zeta_minus_from_plus(zeta_plus: float) -> float:
    """zeta- = -zeta+ / (1 + sqrt(2 - 4 zeta+^2)).

    Rationalized form of the root of 4 z-^2 z+^2 - z-^2 + 2 z- z+ + z+^2 = 0 that
    vanishes with zeta+; it is regular at zeta+ = +-1/2.
    """
    zp = _check_zeta_plus(zeta_plus)
    return -zp / (1.0 + math.sqrt(max(0.0, 2.0 - 4.0 * zp * zp)))


def zeta_minus_from_plus_printed(zeta_plus: float) -> float:
    """(sqrt(2) z+ sqrt(1 - 2 z+^2) - z+) / (4 z+^2 - 1); undefined at zeta+ = +-1/2."""
    zp = _check_zeta_plus(zeta_plus)
    den = 4.0 * zp * zp - 1.0
    if den == 0.0:
        raise ZeroDivisionError("printed form is 0/0 at zeta+ = +-1/2")
    return (math.sqrt(2.0) * zp * math.sqrt(max(0.0, 1.0 - 2.0 * zp * zp)) - zp) / den


@dataclass(frozen=True)
class QuadConstraintSolution:
    metric: QuadMetricParams
    hamiltonian: QuadHamiltonianParams
    forced: dict
    report: PseudoHermiticityReport

    @property
    def hermiticity_residual(self) -> float:
        return self.report.counterpart_hermiticity_residual

    def as_dict(self) -> dict:
        return {
            "family": "quad-exponent",
            "metric": self.metric.as_dict(),
            "hamiltonian": self.hamiltonian.as_dict(),
            "forced": dict(self.forced),
            "hermiticityResidual": self.hermiticity_residual,
        }


def _spin1_forced(p: QuadHamiltonianParams, zeta0: float, zp: float, zm: float) -> dict[str, float]:
    e = math.exp(2.0 * zeta0)
    beta0 = 4.0 * p.betaPP * zp * (8.0 * zp**2 - math.sqrt(2.0 - 4.0 * zp**2) + 2.0) / (16.0 * zp**2 + 1.0)
    den_a = e * (zm * (4.0 * zp + 2.0) + 1.0) + 2.0 * zp - 1.0
    den_b = e * (zm * (4.0 * zp - 2.0) + 1.0) - 2.0 * zp - 1.0
    forced = {"beta0": beta0}
    for name, num, den in (
        ("alphaP", p.alphaP0 * (2.0 * zp - 1.0), den_a),
        ("betaP", -p.betaP0 * (2.0 * zp + 1.0), den_b),
    ):
        if den == 0.0:
            if num != 0.0:
                raise DomainError(f"{name} is forced through a vanishing denominator")
            forced[name] = getattr(p, name)  # 0/0 leaves the coupling free
        else:
            forced[name] = num / den
    return forced


def solve_quad_constraints_spin1(
    p: QuadHamiltonianParams,
    seed: tuple[float, float],
    rep: SpinRepresentation | None = None,
    *,
    tol: float = 1e-9,
) -> list[QuadConstraintSolution]:
    """Quadratic metric for a spin-1 Hamiltonian, given seed = (zeta0, zeta+).

    zeta- follows from zeta+, and beta0, beta+ and alpha+ are forced; the other
    six couplings are free. The solution is checked by conjugating at l = 1
    and is dropped (empty list) if the counterpart is not Hermitian within tol.
    """
    if rep is None:
        rep = build_spin_rep(1)
    if rep.two_l != SPIN1_TWO_L:
        raise DomainError(f"the quadratic-metric constraints hold only at l = 1, got l = {rep.l}")
    zeta0, zeta_plus = seed
    zeta0 = float(zeta0)
    if not math.isfinite(zeta0):
        raise DomainError("zeta0 must be finite")
    zp = _check_zeta_plus(zeta_plus)
    zm = zeta_minus_from_plus(zp)
    forced = _spin1_forced(p, zeta0, zp, zm)
    ham = replace(p, **forced)
    q = QuadMetricParams.unconstrained(zeta0, zp, zm)
    h = build_hamiltonian(ham, rep)
    report = verify_dyson_map(h, quad_dyson_operator(q, rep), tol)
    if not report.counterpart_hermitian:
        return []
    return [QuadConstraintSolution(q, ham, forced, report)]


# ---------------------------------------------------------------- worked spin-1 example

_SQRT7 = math.sqrt(7.0)
FIGURE4_ZETA_PLUS = 0.25
FIGURE4_ZETA_MINUS = (2.0 - _SQRT7) / 6.0


def figure4_hamiltonian_params(beta0: float) -> QuadHamiltonianParams:
    """i b0 L0 - 4(1 + i k b0) L+^2 - 4(1 - i k b0) L-^2 + L0^2 + 3(L-L+ + L+L-), k = 1/(sqrt7 - 5)."""
    return QuadHamiltonianParams(
        beta0=beta0,
        alpha00=1.0,
        alphaPP=-4.0,
        betaPP=4.0 * beta0 / (5.0 - _SQRT7),
        alphaPM=3.0,
    )


def figure4_hamiltonian(beta0: float, rep: SpinRepresentation | None = None) -> np.ndarray:
    rep = rep if rep is not None else build_spin_rep(1)
    return build_hamiltonian(figure4_hamiltonian_params(beta0), rep)


def figure4_hamiltonian_printed(beta0: float, rep: SpinRepresentation | None = None) -> np.ndarray:
    """i b0 L0 + 4(1 + i b0/(sqrt7 - 5))(L-^2 - L+^2) + L0^2 + 3(L-L+ + L+L-), taken literally.

    Not of the anti-linear symmetric form; its spectrum is complex for
    generic beta0. Kept for comparison with the corrected version.
    """
    rep = rep if rep is not None else build_spin_rep(1)
    L0, Lp, Lm = rep.L0, rep.Lplus, rep.Lminus
    c = 4.0 * (1.0 + 1j * beta0 / (_SQRT7 - 5.0))
    return 1j * beta0 * L0 + c * (Lm @ Lm - Lp @ Lp) + L0 @ L0 + 3.0 * (Lm @ Lp + Lp @ Lm)


def figure4_metric(zeta0: float = 0.0) -> QuadMetricParams:
    """zeta+ = 1/4, zeta- = (2 - sqrt7)/6; zeta0 is free."""
    return QuadMetricParams.unconstrained(zeta0, FIGURE4_ZETA_PLUS, FIGURE4_ZETA_MINUS)


def figure4_eigenvalues(beta0: float) -> np.ndarray:
    """12 and 7 +- sqrt(81 b0^2 + 64 (431 - 160 sqrt7)) / (16 - 5 sqrt7), ascending."""
    r = math.sqrt(81.0 * beta0**2 + 64.0 * (431.0 - 160.0 * _SQRT7)) / (16.0 - 5.0 * _SQRT7)
    return np.sort(np.array([7.0 - r, 7.0 + r, 12.0]))


def figure4_numeric_eigenvalues(beta0: float) -> np.ndarray:
    """Dense diagonalization of the spin-1 Hamiltonian, ascending by real part."""
    w = eigenvalues(figure4_hamiltonian(beta0)).eigenvalues
    return w[np.argsort(w.real, kind="stable")]
