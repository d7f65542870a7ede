"""Hermitian counterparts h = eta H eta^-1 for the linear-exponent Dyson maps.

h is built two ways: from closed-form real coefficients, and by direct
conjugation with the matrix exponential.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields

import mpmath
import numpy as np
import scipy.linalg

from .linear_metric import LinearMetricParams, dyson_operator, metric_exponent
from .numerics import cosh_even
from .su2_core import QuadHamiltonianParams, SpinRepresentation, residual_norm

__all__ = [
    "CounterpartCoeffs",
    "MetricOperator",
    "PseudoHermiticityReport",
    "ConditioningWarning",
    "counterpart_coeffs",
    "assemble_counterpart",
    "counterpart_line_groups",
    "counterpart_matrix",
    "metric_operator",
    "conjugation_oracle",
    "extended_conjugation_oracle",
    "verify_pseudo_quasi_hermiticity",
    "verify_dyson_map",
]


class ConditioningWarning(RuntimeWarning):
    """eta is so ill-conditioned that eta H eta^-1 loses accuracy."""


def _barred(lam, G, G0, Y, b0, ap, bp, a00, ap0, bp0, app, bpp, apm):
    r2=G**2+lam**2
    Q=Y**2*(4*r2+G0**2)+1
    Ap=ap*(1-Y**2*(-4*G**2+G0**2+4*lam**2))+2*Y*(b0*(G+G0*lam*Y)-bp*(G0+4*G*lam*Y))
    A00=(a00*Q**2
         -8*Y*(G*bp0+G0*Y**3*(4*G0*(G**2*(apm-app)+lam**2*(apm+app)+2*G*lam*bpp)-lam*(4*r2+G0**2)*bp0)
               +Y*(-G0*lam*bp0+4*r2*apm+4*G**2*app-4*lam**2*app-8*G*lam*bpp)
               +Y**2*(G*(4*r2+G0**2)*bp0+8*G0*((lam-G)*(G+lam)*bpp-2*G*lam*app))
               +ap0*(lam+G*G0*Y)*Q))
    Apm=(2*Y*(Y*(G*G0*(ap0*(4*Y**2*r2+1)-16*lam*Y*app)
                 +G0**2*Y*(lam*(ap0-2*lam*Y*a00+4*lam*Y*app)-2*G**2*Y*(a00+2*app))
                 -2*G**2*(a00-2*(lam*Y*ap0+app))+G*G0**3*Y**2*ap0
                 -8*bpp*(lam+G*G0*Y)*(G-G0*lam*Y))
              +bp0*(G-G0*lam*Y)*Q)
         +2*lam*Y*(ap0+4*lam**2*Y**2*ap0-2*lam*Y*(a00+2*app))
         +apm*(Y**4*(16*r2**2+G0**4)+2*G0**2*Y**2+1))
    App=(app*(Y**4*(16*(G**4-6*G**2*lam**2+lam**4)+G0**4)-6*G0**2*Y**2+1)
         -2*Y*(-G*bp0
               +Y**3*(G0*(lam*(-12*G**2+G0**2+4*lam**2)*bp0+2*G0*(lam-G)*(G+lam)*(a00-2*apm))
                      +32*G*lam*(G**2-lam**2)*bpp)
               +Y**2*(G*(-4*G**2+3*G0**2+12*lam**2)*bp0+8*G*G0*lam*(a00-2*apm)-2*G0**3*bpp)
               +ap0*(-12*G*G0*lam**2*Y**3+lam*(1-3*(4*G**2+G0**2)*Y**2)
                     +G*G0*Y*((4*G**2+G0**2)*Y**2-3)+4*lam**3*Y**2)
               -3*G0*lam*Y*bp0
               -2*Y*(lam-G)*(G+lam)*(a00-2*apm)+2*G0*bpp))
    A0p=2*Y*(2*(Y*(G0*(lam*bpp*(4*Y**2*(lam**2-3*G**2)+3)-4*Y*r2*bp0)
                   +4*(lam**2*ap0+G*lam*(bp0-3*lam*Y*bpp)+G**3*Y*bpp)
                   +G*G0**2*Y*(-4*G*Y*ap0+4*lam*Y*bp0+3*bpp)+G0**3*lam*(-Y**2)*bpp)
                +apm*(lam-G*G0*Y)*Q-G*bpp
                +app*(-12*G*G0*lam**2*Y**3+lam*(3*(4*G**2+G0**2)*Y**2-1)
                      +G*G0*Y*((4*G**2+G0**2)*Y**2-3)-4*lam**3*Y**2))
             +a00*(G*G0*Y-lam)*Q)
    Ap0=(2*Y*(-G0*bp0
              +Y**3*(4*G*lam*(4*r2+G0**2)*bp0
                     +4*G0*(G**3*(a00-2*apm+2*app)+G*lam**2*(a00-2*apm-6*app)-6*G**2*lam*bpp+2*lam**3*bpp)
                     +G0**3*(G*(a00-2*apm+2*app)-2*lam*bpp))
              -Y**2*(4*G0*r2*bp0+G0**3*bp0
                     +4*(G**2*lam*(a00-2*(apm+3*app))+lam**3*(a00-2*apm+2*app)-2*G**3*bpp+6*G*lam**2*bpp)
                     +G0**2*(lam*(a00-2*(apm+3*app))-6*G*bpp))
              +4*G*lam*Y*bp0
              +G0*Y*(G*(a00-2*apm-6*app)+6*lam*bpp)-2*G*bpp)
         +ap0*(Y**4*(16*lam**4-(4*G**2+G0**2)**2)+8*lam**2*Y**2+1)-2*lam*Y*(a00-2*apm+2*app))
    Bp=bp*(Y**2*(-4*G**2-G0**2+4*lam**2)+1)-2*lam*Y*(b0+4*ap*G*Y)+2*G0*Y*(ap+b0*G*Y)
    Bpp=(2*Y*(G0*(Y*(3*G*bp0+lam*ap0*(-4*Y**2*(lam**2-3*G**2)-3)+4*G*Y**2*(G**2-3*lam**2)*bp0
                     +4*Y*(lam-G)*(G+lam)*(a00-2*apm))+2*app)
              +G*(4*lam*Y*(a00+Y*(8*Y*(lam-G)*(G+lam)*app-3*G*bp0)-2*apm)
                  +ap0*(4*Y**2*(G**2-3*lam**2)-1))
              +G0**2*Y**2*(3*lam*bp0+G*(3*ap0-4*lam*Y*(a00-2*apm)))
              +G0**3*Y**2*(lam*Y*ap0-G*Y*bp0-2*app))
         +8*lam**3*Y**3*bp0-2*lam*Y*bp0
         +bpp*(Y**4*(G0**4-16*(G**4-6*G**2*lam**2+lam**4))-6*G0**2*Y**2+1))
    B0p=-2*Y*(-2*(4*Y*(G+G0*lam*Y)*(ap0*(lam+G*G0*Y)+bp0*(G-G0*lam*Y))
                  +apm*(G+G0*lam*Y)*Q
                  +app*(-12*G**2*G0*lam*Y**3+4*G**3*Y**2+G0*lam*Y*(Y**2*(G0**2+4*lam**2)-3)
                        +G*(1-3*Y**2*(G0**2+4*lam**2))))
              +a00*(G+G0*lam*Y)*Q
              +bpp*(-24*G*G0*lam**2*Y**3+lam*(6*(4*G**2-G0**2)*Y**2+2)
                    +2*G*G0*Y*((4*G**2-G0**2)*Y**2+3)-8*lam**3*Y**2))
    Bp0=(2*Y*(G0**3*Y**2*(ap0+Y*(-lam*a00+2*lam*(apm+app)+2*G*bpp))
              +G0**2*Y**2*(6*lam*bpp-G*(a00-4*lam*Y*ap0-2*apm+6*app))
              +4*G*Y*(lam*(ap0+4*lam**2*Y**2*ap0-lam*Y*(a00-2*apm+6*app))
                      +G**2*Y*(2*(2*lam*Y*ap0+apm+app)-a00))
              +G0*(ap0*(4*Y**2*r2+1)
                   +4*Y**3*(-G**2*lam*(a00-2*apm+6*app)+lam**3*(2*(apm+app)-a00)-2*G**3*bpp+6*G*lam**2*bpp)
                   -Y*(lam*(a00-2*apm+6*app)+6*G*bpp))
              +G*(2*(apm+app)-a00)
              +2*lam*bpp*(4*Y**2*(lam**2-3*G**2)-1))
         +bp0*(Y**4*(-((G0**2+4*lam**2)**2-16*G**4))+8*G**2*Y**2+1))
    return dict(Aplus=Ap, A00=A00, Apm=Apm, App=App, A0p=A0p, Ap0=Ap0, Bplus=Bp, Bpp=Bpp, B0p=B0p, Bp0=Bp0)


_LINEAR = ("Aplus", "Bplus")


@dataclass(frozen=True)
class CounterpartCoeffs:
    """Barred real coefficients of the Hermitian counterpart.

    The physical coefficients are A_i = cosh^2(theta) Abar_i for the linear
    ones (Aplus, Bplus) and A_ij = cosh^4(theta) Abar_ij for the quadratic ones.
    """

    Aplus: float
    A00: float
    Apm: float
    App: float
    A0p: float
    Ap0: float
    Bplus: float
    Bpp: float
    B0p: float
    Bp0: float
    cosh_theta: float = 1.0

    def scaled(self) -> dict[str, float]:
        c2 = self.cosh_theta**2
        out = {}
        for f in fields(self):
            if f.name == "cosh_theta":
                continue
            w = c2 if f.name in _LINEAR else c2 * c2
            out[f.name] = w * getattr(self, f.name)
        return out

    def quadratic_part_vanishes(self, tol: float = 0.0) -> bool:
        s = self.scaled()
        return all(abs(s[k]) <= tol for k in ("A00", "Apm", "App", "A0p", "Ap0", "Bpp", "B0p", "Bp0"))


def counterpart_coeffs(p: QuadHamiltonianParams, m: LinearMetricParams) -> CounterpartCoeffs:
    """Closed-form coefficients of eta H eta^-1 (meaningful on the constraint manifold)."""
    vals = _barred(
        m.lam, m.Gamma, m.Gamma0, m.Y,
        p.beta0, p.alphaP, p.betaP, p.alpha00, p.alphaP0, p.betaP0, p.alphaPP, p.betaPP, p.alphaPM,
    )
    return CounterpartCoeffs(**{k: float(v) for k, v in vals.items()}, cosh_theta=cosh_even(m.theta_sq))


def counterpart_line_groups(c: CounterpartCoeffs, rep: SpinRepresentation) -> list[np.ndarray]:
    """The four Hermitian groups of terms making up h."""
    a = c.scaled()
    L0, Lp, Lm = rep.L0, rep.Lplus, rep.Lminus
    lin = complex(a["Aplus"] + a["A0p"], a["Bplus"] + a["B0p"])
    sq = complex(a["App"], a["Bpp"])
    mix = complex(a["A0p"] + a["Ap0"], a["B0p"] + a["Bp0"])
    return [
        -2 * a["Apm"] * L0 + a["A00"] * (L0 @ L0) + 2 * a["Apm"] * (Lp @ Lm),
        lin * Lp + lin.conjugate() * Lm,
        sq * (Lp @ Lp) + sq.conjugate() * (Lm @ Lm),
        mix * (Lp @ L0) + mix.conjugate() * (L0 @ Lm),
    ]


def assemble_counterpart(c: CounterpartCoeffs, rep: SpinRepresentation) -> np.ndarray:
    return sum(counterpart_line_groups(c, rep))


def counterpart_matrix(p: QuadHamiltonianParams, m: LinearMetricParams, rep: SpinRepresentation) -> np.ndarray:
    return assemble_counterpart(counterpart_coeffs(p, m), rep)


@dataclass(frozen=True, eq=False)
class MetricOperator:
    eta: np.ndarray
    eta_inv: np.ndarray
    rho: np.ndarray

    @property
    def condition(self) -> float:
        return float(np.linalg.norm(self.eta, 2) * np.linalg.norm(self.eta_inv, 2))


def _eta_inverse(eta: np.ndarray) -> np.ndarray:
    return scipy.linalg.solve(eta, np.eye(eta.shape[0], dtype=complex))


def metric_operator(m: LinearMetricParams, rep: SpinRepresentation) -> MetricOperator:
    eta = dyson_operator(m, rep)
    return MetricOperator(eta=eta, eta_inv=_eta_inverse(eta), rho=eta.conj().T @ eta)


def conjugation_oracle(
    h: np.ndarray,
    m: LinearMetricParams,
    rep: SpinRepresentation,
    *,
    cond_limit: float = 1e12,
) -> np.ndarray:
    """eta H eta^-1 with eta from the matrix exponential; X eta = eta H is solved for X."""
    h = np.asarray(h, dtype=complex)
    eta = dyson_operator(m, rep)
    cond = np.linalg.cond(eta)
    if cond > cond_limit:
        warnings.warn(f"cond(eta) = {cond:.3g} exceeds {cond_limit:.1g}", ConditioningWarning, stacklevel=2)
    return scipy.linalg.solve(eta.T, (eta @ h).T).T


def extended_conjugation_oracle(
    h: np.ndarray,
    m: LinearMetricParams,
    rep: SpinRepresentation,
    *,
    dps: int = 40,
) -> np.ndarray:
    """eta H eta^-1 evaluated with mpmath at ``dps`` digits, eta^-1 = exp(-T) exactly.

    In double precision the result carries rounding of order eps ||eta|| ||eta^-1|| ||H||,
    which for large metrics hides whether the counterpart is Hermitian.
    """
    t = metric_exponent(m, rep)
    with mpmath.workdps(dps):
        tm = mpmath.matrix(t.tolist())
        hm = mpmath.matrix(np.asarray(h, dtype=complex).tolist())
        out = mpmath.expm(tm) * hm * mpmath.expm(-tm)
        return np.array([[complex(out[i, j]) for j in range(out.cols)] for i in range(out.rows)])


@dataclass(frozen=True)
class PseudoHermiticityReport:
    rho_hermiticity_residual: float
    rho_min_eigenvalue: float
    intertwining_residual: float
    counterpart_hermiticity_residual: float
    rho_hermitian: bool
    rho_positive: bool
    intertwining: bool
    counterpart_hermitian: bool

    @property
    def passed(self) -> bool:
        """Intertwining and Hermitian counterpart; positivity is reported separately."""
        return self.intertwining and self.counterpart_hermitian

    def as_dict(self) -> dict:
        return {
            "rhoHermiticityResidual": self.rho_hermiticity_residual,
            "rhoMinEigenvalue": self.rho_min_eigenvalue,
            "intertwiningResidual": self.intertwining_residual,
            "counterpartHermiticityResidual": self.counterpart_hermiticity_residual,
            "rhoHermitian": self.rho_hermitian,
            "rhoPositive": self.rho_positive,
            "intertwining": self.intertwining,
            "counterpartHermitian": self.counterpart_hermitian,
        }


def verify_dyson_map(h: np.ndarray, eta: np.ndarray, tol: float = 1e-8) -> PseudoHermiticityReport:
    """Check rho = eta^dagger eta for any invertible Dyson matrix eta.

    Residuals are reported as absolute max-norms; the pass flags scale tol by
    the max-norm of rho (and of H or the counterpart) when those exceed 1.
    """
    h = np.asarray(h, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    if h.shape != eta.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"shape mismatch: H {h.shape}, eta {eta.shape}")
    rho = eta.conj().T @ eta
    rho_res = residual_norm(rho - rho.conj().T)
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    inter = residual_norm(h.conj().T @ rho - rho @ h)
    hc = scipy.linalg.solve(eta.T, (eta @ h).T).T
    herm = residual_norm(hc - hc.conj().T)
    # Flags compare against tol times the size of the products, so that
    # large but exact metrics are not rejected for rounding alone.
    rho_size = max(1.0, residual_norm(rho))
    return PseudoHermiticityReport(
        rho_hermiticity_residual=rho_res,
        rho_min_eigenvalue=min_eig,
        intertwining_residual=inter,
        counterpart_hermiticity_residual=herm,
        rho_hermitian=rho_res <= tol * rho_size,
        rho_positive=min_eig > 0.0,
        intertwining=inter <= tol * rho_size * max(1.0, residual_norm(h)),
        counterpart_hermitian=herm <= tol * max(1.0, residual_norm(hc)),
    )


def verify_pseudo_quasi_hermiticity(
    h: np.ndarray,
    m: LinearMetricParams,
    rep: SpinRepresentation,
    tol: float = 1e-8,
) -> PseudoHermiticityReport:
    """Check rho = eta^dagger eta: Hermitian, positive, and H^dagger rho = rho H."""
    return verify_dyson_map(h, dyson_operator(m, rep), tol)
