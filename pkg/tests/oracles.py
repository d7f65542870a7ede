"""Reference computations that do not go through the package's closed forms.

* Spin matrices, Hamiltonians and Dyson maps built from scratch, with scipy's
  matrix exponential.
* A representation-free check: eta L eta^-1 = sum_j b_ij L_j is projected out
  numerically at l = 1, substituted into H, and the result is normal ordered
  in the Poincare-Birkhoff-Witt basis (L+ < L0 < L-). H is Hermitized iff the
  ordered coefficients pair up under conjugation.
* Generators of random Hamiltonian/metric pairs on each solved family.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from su2metric.linear_metric import (
    LinearMetricParams,
    hermitian_alternative,
    solve_gamma_zero_family,
    solve_lambda_zero_family,
    solve_linear_family,
    solve_quadratic_family,
)
from su2metric.su2_core import QuadHamiltonianParams

# ---------------------------------------------------------------- matrices


def spin_matrices(l: float):
    """(L0, L+, L-) in the basis m = l, ..., -l."""
    m = np.arange(l, -l - 1, -1.0)
    n = len(m)
    lp = np.zeros((n, n), complex)
    for k in range(1, n):
        lp[k - 1, k] = math.sqrt((l - m[k]) * (l + m[k] + 1))
    return np.diag(m).astype(complex), lp, lp.conj().T


def hamiltonian(p: QuadHamiltonianParams, l: float) -> np.ndarray:
    b0, ap, bp, a00, ap0, bp0, app, bpp, apm = p.as_array()
    L0, Lp, Lm = spin_matrices(l)
    return (
        1j * b0 * L0
        + (ap + 1j * bp) * Lp
        + (ap - 1j * bp) * Lm
        + a00 * L0 @ L0
        + (ap0 + 1j * bp0) * Lp @ L0
        - (ap0 - 1j * bp0) * Lm @ L0
        + (app + 1j * bpp) * Lp @ Lp
        + (app - 1j * bpp) * Lm @ Lm
        + apm * (Lp @ Lm + Lm @ Lp)
    )


def eta(lam: float, G: float, G0: float, l: float) -> np.ndarray:
    L0, Lp, Lm = spin_matrices(l)
    return scipy.linalg.expm(2 * (1j * G0 * L0 + (lam + 1j * G) * Lp + (lam - 1j * G) * Lm))


def conjugate(h: np.ndarray, e: np.ndarray) -> np.ndarray:
    return e @ h @ np.linalg.inv(e)


def herm_defect(h: np.ndarray) -> float:
    return float(np.abs(h - h.conj().T).max())


# ---------------------------------------------------------------- adjoint action, numerically


def adjoint_numeric(lam: float, G: float, G0: float) -> np.ndarray:
    """b with eta L_i eta^-1 = sum_j b_ij L_j, (L_0, L_1, L_2) = (L0, L+, L-), by projection at l = 1."""
    gens = spin_matrices(1.0)
    e = eta(lam, G, G0, 1.0)
    ei = np.linalg.inv(e)
    basis = np.array([g.ravel() for g in gens]).T
    b = np.zeros((3, 3), complex)
    for i, g in enumerate(gens):
        b[i] = np.linalg.lstsq(basis, (e @ g @ ei).ravel(), rcond=None)[0]
    return b


# ---------------------------------------------------------------- PBW normal ordering

_ORDER = {"P": 0, "Z": 1, "M": 2}
_SWAP = {
    ("Z", "P"): {("P", "Z"): 1, ("P",): 1},  # L0 L+ = L+ L0 + L+
    ("M", "P"): {("P", "M"): 1, ("Z",): -2},  # L- L+ = L+ L- - 2 L0
    ("M", "Z"): {("Z", "M"): 1, ("M",): 1},  # L- L0 = L0 L- + L-
}


def _mul(a: str, b: str) -> dict:
    if _ORDER[a] <= _ORDER[b]:
        return {(a, b): 1}
    return _SWAP[(a, b)]


def _add(d: dict, e: dict, c=1) -> dict:
    for k, v in e.items():
        d[k] = d.get(k, 0) + c * v
    return d


def _prod(x: dict, y: dict) -> dict:
    out: dict = {}
    for (k1,), v1 in x.items():
        for (k2,), v2 in y.items():
            _add(out, _mul(k1, k2), v1 * v2)
    return out


def ordered_coefficients(p: QuadHamiltonianParams, b: np.ndarray) -> dict:
    """Normal-ordered coefficients of H with every generator replaced by sum_j b_ij L_j."""
    b0, ap, bp, a00, ap0, bp0, app, bpp, apm = p.as_array()
    keys = ["Z", "P", "M"]
    t = {k: {(keys[j],): b[i][j] for j in range(3)} for i, k in enumerate(keys)}
    Z, P, M = t["Z"], t["P"], t["M"]
    h: dict = {}
    _add(h, Z, 1j * b0)
    _add(h, P, ap + 1j * bp)
    _add(h, M, ap - 1j * bp)
    _add(h, _prod(Z, Z), a00)
    _add(h, _prod(P, Z), ap0 + 1j * bp0)
    _add(h, _prod(M, Z), -(ap0 - 1j * bp0))
    _add(h, _prod(P, P), app + 1j * bpp)
    _add(h, _prod(M, M), app - 1j * bpp)
    _add(h, _prod(P, M), apm)
    _add(h, _prod(M, P), apm)
    return h


def pbw_defect(p: QuadHamiltonianParams, m: LinearMetricParams) -> float:
    """Largest violation of Hermiticity among the ordered coefficients of eta H eta^-1."""
    h = ordered_coefficients(p, adjoint_numeric(m.lam, m.Gamma, m.Gamma0))

    def g(*k):
        return complex(h.get(k, 0))

    return max(
        abs(g("Z").imag),
        abs(g("P") - g("M").conjugate()),
        abs(g("Z", "Z").imag),
        abs(g("P", "M").imag),
        abs(g("P", "P") - g("M", "M").conjugate()),
        abs(g("P", "Z") - g("Z", "M").conjugate()),
    )


# ---------------------------------------------------------------- random solved instances

THETA_CAP = 1.0


def _random_quad(rng) -> QuadHamiltonianParams:
    return QuadHamiltonianParams.from_array(rng.uniform(-1.0, 1.0, 9))


def _accept(result):
    return [s for s in result if s.theta <= THETA_CAP]


def solved_linear(rng):
    ap, bp, a00 = rng.uniform(-1.5, 1.5, 3)
    bound = 2 * math.hypot(ap, bp)
    b0 = rng.uniform(-0.9, 0.9) * bound
    p = QuadHamiltonianParams(beta0=b0, alphaP=ap, betaP=bp, alpha00=a00, alphaPM=a00 / 2)
    if rng.random() < 0.5:
        return _accept(hermitian_alternative(p))
    return _accept(solve_linear_family(p, LinearMetricParams(*rng.uniform(-1, 1, 3))))


def solved_quadratic(rng):
    return _accept(solve_quadratic_family(_random_quad(rng), rng.uniform(-0.9, 0.9), mode="project"))


def solved_gamma_zero(rng):
    return _accept(solve_gamma_zero_family(_random_quad(rng), rng.uniform(-1.9, 1.9), mode="project"))


def solved_lambda_zero(rng):
    return _accept(solve_lambda_zero_family(_random_quad(rng), rng.uniform(-1.9, 1.9), mode="project"))


FAMILY_SAMPLERS = {
    "linear": solved_linear,
    "quadratic-gamma0zero": solved_quadratic,
    "appendix-gamma-zero": solved_gamma_zero,
    "appendix-lambda-zero": solved_lambda_zero,
}


def solved_instances(rng, per_family: int, max_tries: int = 5000):
    """per_family solutions from each family (first solution of each successful draw)."""
    out = []
    for name, sampler in FAMILY_SAMPLERS.items():
        got = 0
        for _ in range(max_tries):
            sols = sampler(rng)
            if sols:
                out.append((name, sols[0]))
                got += 1
                if got == per_family:
                    break
        if got < per_family:
            raise RuntimeError(f"could not draw {per_family} instances of {name}")
    return out
