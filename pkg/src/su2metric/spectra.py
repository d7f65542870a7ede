"""Eigenvalues of non-normal matrices, spectrum matching and reality scans.

Eigenvalues come from LAPACK (Hessenberg reduction + shifted QR). Each
eigenvalue gets a first-order error bound eps * ||M|| / s_i, where s_i is the
cosine between its left and right eigenvectors. When the worst bound exceeds
the requested accuracy the spectrum is recomputed in extended precision with
mpmath, which matters close to exceptional points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import mpmath
import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .su2_core import QuadHamiltonianParams, SpinRepresentation, build_hamiltonian

__all__ = [
    "SpectrumResult",
    "SpectrumMatch",
    "RealityScan",
    "EigenConvergenceError",
    "eigenvalues",
    "hermitian_eigenvalues",
    "compare_spectra",
    "reality_scan",
    "is_real_eigenvalue",
    "linear_eigenvalue_law",
    "linear_eigenvalue_law_unit_step",
    "avoided_crossings",
    "AvoidedCrossing",
]

MAX_DIM = 512
EPS = np.finfo(float).eps


class EigenConvergenceError(RuntimeError):
    """The eigensolver did not converge."""


def _real_tol(z, tol: float):
    return tol * (1.0 + np.abs(z))


def is_real_eigenvalue(z, tol: float = 1e-8):
    """|Im z| <= tol (1 + |z|)."""
    return np.abs(np.imag(z)) <= _real_tol(z, tol)


def _lex_sort(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))]


def _conjugate_paired(z: np.ndarray, tol: float) -> bool:
    nonreal = [x for x in z if not is_real_eigenvalue(x, tol)]
    used = [False] * len(nonreal)
    for i, x in enumerate(nonreal):
        if used[i]:
            continue
        used[i] = True
        best, best_d = None, math.inf
        for j, y in enumerate(nonreal):
            if not used[j]:
                d = abs(y - x.conjugate())
                if d < best_d:
                    best, best_d = j, d
        if best is None or best_d > 2 * _real_tol(x, tol):
            return False
        used[best] = True
    return True


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    max_imag_abs: float
    is_real: bool
    conjugate_paired: bool
    error_bound: float
    extended_precision: bool
    eigenvectors: np.ndarray | None = None
    backward_errors: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _mp_eig(m: np.ndarray, dps: int, vectors: bool):
    with mpmath.workdps(dps):
        a = mpmath.matrix(m.tolist())
        if vectors:
            e, er = mpmath.eig(a, left=False, right=True)
            vals = np.array([complex(x) for x in e])
            vecs = np.array([[complex(er[i, j]) for j in range(er.cols)] for i in range(er.rows)])
            return vals, vecs
        e = mpmath.eig(a, left=False, right=False)
        return np.array([complex(x) for x in e]), None


def _schur_eig(m: np.ndarray):
    """Eigenvalues with left and right eigenvectors from the complex Schur form.

    geev balances the matrix first, and with entries spanning many orders of
    magnitude its back-transformed eigenvectors can be far off even when the
    eigenvalues are fine. Triangular solves on the unbalanced Schur form avoid that.
    """
    t, z = scipy.linalg.schur(m, output="complex")
    n = t.shape[0]
    w = np.diag(t).copy()
    smin = max(EPS * np.abs(t).max(), np.finfo(float).tiny)
    xr = np.eye(n, dtype=complex)
    xl = np.eye(n, dtype=complex)
    for k in range(n):
        if k > 0:
            a = t[:k, :k] - w[k] * np.eye(k)
            d = np.diagonal(a).copy()
            d[np.abs(d) < smin] = smin
            np.fill_diagonal(a, d)
            xr[:k, k] = scipy.linalg.solve_triangular(a, -t[:k, k])
        if k < n - 1:
            b = t[k + 1 :, k + 1 :] - w[k] * np.eye(n - k - 1)
            d = np.diagonal(b).copy()
            d[np.abs(d) < smin] = smin
            np.fill_diagonal(b, d)
            xl[k + 1 :, k] = scipy.linalg.solve_triangular(b, -t[k, k + 1 :], trans="T").conj()
    vr, vl = z @ xr, z @ xl
    if not (np.all(np.isfinite(vr)) and np.all(np.isfinite(vl))):
        return scipy.linalg.eig(m, left=True, right=True)
    return w, vl / np.linalg.norm(vl, axis=0), vr / np.linalg.norm(vr, axis=0)


def eigenvalues(
    m: np.ndarray,
    *,
    accuracy: float = 1e-10,
    real_tol: float = 1e-8,
    vectors: bool = False,
    max_dps: int = 60,
) -> SpectrumResult:
    """Full spectrum of a general complex matrix, sorted by (real, imaginary)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eigenvalues expects a square matrix")
    n = m.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if n == 0:
        empty = np.zeros(0, dtype=complex)
        return SpectrumResult(empty, 0.0, True, True, 0.0, False)
    try:
        w, vl, vr = _schur_eig(m)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenConvergenceError(str(exc)) from exc
    norm = np.linalg.norm(m, "fro")
    s = np.abs(np.sum(vl.conj() * vr, axis=0)) / (np.linalg.norm(vl, axis=0) * np.linalg.norm(vr, axis=0))
    with np.errstate(divide="ignore"):
        bounds = np.where(s > 0, n * EPS * norm / s, np.inf)
    bound = float(np.max(bounds))
    extended = False
    vecs = vr if vectors else None
    if bound > accuracy and norm > 0:
        extended = True
        digits = 16 + (math.log10(bound / accuracy) if math.isfinite(bound) else max_dps)
        dps = int(min(max_dps, max(30, math.ceil(digits) + 10)))
        w, vmp = _mp_eig(m, dps, vectors)
        if vectors:
            vecs = vmp
        bound = float(10.0 ** (-dps) * norm / max(float(np.min(s)), 10.0 ** (-dps)))
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    backward = None
    if vectors:
        vecs = vecs[:, order]
        vecs = vecs / np.linalg.norm(vecs, axis=0)
        backward = np.linalg.norm(m @ vecs - vecs * w, axis=0) / max(norm, 1e-300)
    max_imag = float(np.max(np.abs(w.imag)))
    return SpectrumResult(
        eigenvalues=w,
        max_imag_abs=max_imag,
        is_real=bool(np.all(is_real_eigenvalue(w, real_tol))),
        conjugate_paired=_conjugate_paired(w, real_tol),
        error_bound=bound,
        extended_precision=extended,
        eigenvectors=vecs,
        backward_errors=backward,
    )


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Hermitian part of m, ascending (as complex)."""
    m = np.asarray(m, dtype=complex)
    return scipy.linalg.eigvalsh(0.5 * (m + m.conj().T)).astype(complex)


@dataclass(frozen=True)
class SpectrumMatch:
    matched: bool
    max_pair_distance: float


def _as_spectrum(x) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim == 1:
        return x.astype(complex)
    if np.allclose(x, x.conj().T, rtol=0.0, atol=1e-14 * max(1.0, np.abs(x).max())):
        return hermitian_eigenvalues(x)
    return eigenvalues(x).eigenvalues


def compare_spectra(a, b, tol: float = 1e-8) -> SpectrumMatch:
    """Greedy nearest-neighbour matching of two spectra (matrices or eigenvalue lists)."""
    za, zb = _lex_sort(_as_spectrum(a)), _lex_sort(_as_spectrum(b))
    if za.shape != zb.shape:
        raise ValueError(f"dimension mismatch: {za.shape} vs {zb.shape}")
    free = list(range(len(zb)))
    worst = 0.0
    for x in za:
        d = np.abs(zb[free] - x)
        k = int(np.argmin(d))
        worst = max(worst, float(d[k]))
        free.pop(k)
    return SpectrumMatch(worst <= tol, worst)


# ---------------------------------------------------------------- reality scans


@dataclass(frozen=True, eq=False)
class RealityScan:
    parameter: str
    grid: np.ndarray
    max_imag: np.ndarray
    real: np.ndarray
    breakdown_brackets: tuple[tuple[float, float], ...]
    spectra: np.ndarray | None = None

    def first_breakdown(self) -> tuple[float, float] | None:
        return self.breakdown_brackets[0] if self.breakdown_brackets else None


def reality_scan(
    template: QuadHamiltonianParams,
    parameter: str,
    grid: Sequence[float],
    rep: SpinRepresentation,
    *,
    tol: float = 1e-8,
    xtol: float = 1e-6,
    adjust: Callable[[QuadHamiltonianParams], QuadHamiltonianParams] | None = None,
) -> RealityScan:
    """Scan one coupling and bracket every point where the spectrum stops (or starts) being real.

    ``adjust``, if given, maps the parameters after the scanned coupling is set,
    for families where other couplings are tied to it.
    """
    if parameter not in QuadHamiltonianParams.field_names():
        raise ValueError(f"unknown parameter {parameter!r}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid needs at least two points")

    def spectrum_at(x):
        p = replace(template, **{parameter: float(x)})
        if adjust is not None:
            p = adjust(p)
        return eigenvalues(build_hamiltonian(p, rep), real_tol=tol)

    specs = [spectrum_at(x) for x in grid]
    max_imag = np.array([s.max_imag_abs for s in specs])
    real = np.array([s.is_real for s in specs])
    brackets = []
    for i in range(len(grid) - 1):
        if real[i] == real[i + 1]:
            continue
        lo, hi = grid[i], grid[i + 1]
        lo_real = real[i]
        while abs(hi - lo) > xtol:
            mid = 0.5 * (lo + hi)
            if spectrum_at(mid).is_real == lo_real:
                lo = mid
            else:
                hi = mid
        brackets.append((float(min(lo, hi)), float(max(lo, hi))))
    return RealityScan(parameter, grid, max_imag, real, tuple(brackets), np.array([s.eigenvalues for s in specs]))


# ---------------------------------------------------------------- linear subclass


def _linear_frequency(p: QuadHamiltonianParams) -> complex:
    return complex(np.sqrt(complex(p.alphaP**2 + p.betaP**2 - p.beta0**2 / 4.0)))


def _check_linear(p: QuadHamiltonianParams) -> None:
    if not p.is_linear() or p.alphaPM != p.alpha00 / 2.0:
        raise ValueError("the eigenvalue law needs the linear subclass with alphaPM = alpha00/2")


def linear_eigenvalue_law(p: QuadHamiltonianParams, rep: SpinRepresentation) -> np.ndarray:
    """Exact spectrum 2 m omega + alpha00 l (l + 1), omega = sqrt(a+^2 + b+^2 - b0^2/4).

    The linear part is similar to 2 omega L0 (for beta0 = 0 it is 2 a+ Lx - 2 b+ Ly),
    so consecutive levels are 2 omega apart; the alpha00 L^2 shift is constant.
    """
    _check_linear(p)
    l = rep.two_l / 2.0
    return _lex_sort(2.0 * rep.m_values * _linear_frequency(p) + p.alpha00 * l * (l + 1))


def linear_eigenvalue_law_unit_step(p: QuadHamiltonianParams, rep: SpinRepresentation) -> np.ndarray:
    """m omega for m = -l..l: the law with unit level spacing in m."""
    _check_linear(p)
    l = rep.two_l / 2.0
    return _lex_sort(rep.m_values * _linear_frequency(p) + p.alpha00 * l * (l + 1))


# ---------------------------------------------------------------- avoided crossings


@dataclass(frozen=True)
class AvoidedCrossing:
    level: int
    location: float
    gap: float


def avoided_crossings(
    family,
    window: tuple[float, float],
    *,
    points: int = 201,
    rel_floor: float = 1e-9,
) -> list[AvoidedCrossing]:
    """Interior local minima of the gap between adjacent real levels.

    ``family(x)`` returns the real spectrum (ascending) at sweep value x. A
    minimum counts as an avoided crossing when it is strictly interior,
    refined by golden-section search, and the refined gap stays positive.
    """
    xs = np.linspace(window[0], window[1], points)
    levels = np.array([np.sort(np.real(family(x))) for x in xs])
    gaps = np.diff(levels, axis=1)
    out = []
    for k in range(gaps.shape[1]):
        g = gaps[:, k]
        for i in range(1, len(xs) - 1):
            if g[i] < g[i - 1] and g[i] <= g[i + 1]:
                res = minimize_scalar(
                    lambda x: np.diff(np.sort(np.real(family(x))))[k],
                    bracket=(xs[i - 1], xs[i], xs[i + 1]),
                    tol=1e-10,
                )
                gap = float(res.fun)
                scale = max(1.0, float(np.max(np.abs(levels[i]))))
                if gap > rel_floor * scale:
                    out.append(AvoidedCrossing(level=k, location=float(res.x), gap=gap))
    return out
