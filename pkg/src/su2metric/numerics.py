"""Matrix exponential and the even entire functions of theta used by the metrics."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["expm", "sinhc", "cosh_even", "tanhc", "SERIES_CUTOFF"]

# |theta| below which the Taylor series replaces the closed forms.
SERIES_CUTOFF = 1e-4


def expm(a: np.ndarray) -> np.ndarray:
    """exp(A) by scaling and squaring with a truncated Taylor series.

    A is scaled by 2^-s so that its 1-norm is at most 1/2; the series is then
    summed until the next term no longer changes the partial sum, and the
    result is squared s times.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm expects a square matrix")
    n = a.shape[0]
    norm = np.linalg.norm(a, 1) if n else 0.0
    if not np.isfinite(norm):
        raise ValueError("matrix has non-finite entries")
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    b = a / (2.0**s)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-17 * np.linalg.norm(result, 1):
            break
    for _ in range(s):
        result = result @ result
    return result


def _split(theta_sq: float) -> tuple[float, bool]:
    """|theta| and whether theta is imaginary."""
    return math.sqrt(abs(theta_sq)), theta_sq < 0


def sinhc(theta_sq: float) -> float:
    """sinh(theta)/theta as a function of theta^2 (sin(x)/x for imaginary theta)."""
    t, imag = _split(theta_sq)
    if t < SERIES_CUTOFF:
        return 1.0 + theta_sq / 6.0 + theta_sq**2 / 120.0
    return math.sin(t) / t if imag else math.sinh(t) / t


def cosh_even(theta_sq: float) -> float:
    """cosh(theta) as a function of theta^2."""
    t, imag = _split(theta_sq)
    if t < SERIES_CUTOFF:
        return 1.0 + theta_sq / 2.0 + theta_sq**2 / 24.0
    return math.cos(t) if imag else math.cosh(t)


def tanhc(theta_sq: float) -> float:
    """Y = tanh(theta)/theta as a function of theta^2 (tan(x)/x for imaginary theta)."""
    t, imag = _split(theta_sq)
    if t < SERIES_CUTOFF:
        return 1.0 - theta_sq / 3.0 + 2.0 * theta_sq**2 / 15.0
    return math.tan(t) / t if imag else math.tanh(t) / t
