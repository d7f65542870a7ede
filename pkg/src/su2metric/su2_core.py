"""Finite spin-l representations of su(2) and the quadratic Hamiltonian family.

Basis ordering is fixed as m = l, l-1, ..., -l, so row/column 0 is m = l.
The spin l is carried around as the integer ``two_l = 2l`` to avoid
floating-point comparisons on half-integers.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import NamedTuple

import numpy as np

__all__ = [
    "SpinRepresentation",
    "QuadHamiltonianParams",
    "SigmaParams",
    "Check",
    "build_spin_rep",
    "spin_rep_from_two_l",
    "build_hamiltonian",
    "to_sigma",
    "from_sigma",
    "flip_matrix",
    "check_antilinear_symmetry",
    "check_casimir_commutes",
    "algebra_residuals",
    "residual_norm",
    "commutator",
]


def residual_norm(m: np.ndarray) -> float:
    """Max absolute entry, the norm used for every residual in the package."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SpinRepresentation:
    """Dense matrices of the su(2) generators in the spin-l irrep."""

    two_l: int
    L0: np.ndarray
    Lplus: np.ndarray
    Lminus: np.ndarray
    Lx: np.ndarray
    Ly: np.ndarray
    Lz: np.ndarray

    @property
    def l(self) -> Fraction:
        return Fraction(self.two_l, 2)

    @property
    def dim(self) -> int:
        return self.two_l + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (descending)."""
        return np.arange(self.two_l, -self.two_l - 1, -2) / 2.0

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def casimir(self) -> np.ndarray:
        """L0^2 + (L+L- + L-L+)/2."""
        return self.L0 @ self.L0 + 0.5 * (self.Lplus @ self.Lminus + self.Lminus @ self.Lplus)


def _two_l_from(l) -> int:
    if isinstance(l, bool):
        raise TypeError("spin must be a number, not bool")
    if isinstance(l, (int, np.integer)):
        two_l = 2 * int(l)
    else:
        frac = Fraction(l).limit_denominator(2) if isinstance(l, float) else Fraction(l)
        if isinstance(l, float) and float(frac) != l:
            raise ValueError(f"l={l!r} is not a half-integer")
        if (2 * frac).denominator != 1:
            raise ValueError(f"l={l!r} is not a half-integer")
        two_l = int(2 * frac)
    if two_l < 0:
        raise ValueError(f"l must be non-negative, got {l!r}")
    return two_l


def spin_rep_from_two_l(two_l: int) -> SpinRepresentation:
    """Build the representation with dimension two_l + 1."""
    if isinstance(two_l, bool) or not isinstance(two_l, (int, np.integer)):
        raise TypeError("two_l must be an integer")
    two_l = int(two_l)
    if two_l < 0:
        raise ValueError(f"two_l must be non-negative, got {two_l}")
    l = two_l / 2.0
    m = np.arange(two_l, -two_l - 1, -2) / 2.0
    dim = two_l + 1
    lp = np.zeros((dim, dim), dtype=complex)
    # L+|m> = sqrt((l-m)(l+m+1)) |m+1>; |m+1> sits one row above |m>.
    for k in range(1, dim):
        lp[k - 1, k] = np.sqrt((l - m[k]) * (l + m[k] + 1.0))
    lm = lp.conj().T
    l0 = np.diag(m).astype(complex)
    return SpinRepresentation(
        two_l=two_l,
        L0=_readonly(l0),
        Lplus=_readonly(lp),
        Lminus=_readonly(lm),
        Lx=_readonly(0.5 * (lp + lm)),
        Ly=_readonly((lp - lm) / 2j),
        Lz=_readonly(l0),
    )


def build_spin_rep(l) -> SpinRepresentation:
    """Spin-l representation; ``l`` may be an int, a half-integer float or a Fraction."""
    return spin_rep_from_two_l(_two_l_from(l))


@dataclass(frozen=True)
class QuadHamiltonianParams:
    """The nine real couplings of the quadratic su(2) Hamiltonian.

    H = i b0 L0 + (a+ + i b+) L+ + (a+ - i b+) L- + a00 L0^2
        + (a+0 + i b+0) L+ L0 - (a+0 - i b+0) L- L0
        + (a++ + i b++) L+^2 + (a++ - i b++) L-^2 + a+- (L+L- + L-L+)
    """

    beta0: float = 0.0
    alphaP: float = 0.0
    betaP: float = 0.0
    alpha00: float = 0.0
    alphaP0: float = 0.0
    betaP0: float = 0.0
    alphaPP: float = 0.0
    betaPP: float = 0.0
    alphaPM: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not np.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")
            object.__setattr__(self, f.name, v)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in self.field_names()], dtype=float)

    @classmethod
    def from_array(cls, values) -> "QuadHamiltonianParams":
        values = list(values)
        if len(values) != 9:
            raise ValueError("expected 9 values")
        return cls(*values)

    def as_dict(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in self.field_names()}

    def is_linear(self) -> bool:
        """True when the L+L0, L-L0, L+^2, L-^2 couplings all vanish."""
        return self.alphaP0 == self.betaP0 == self.alphaPP == self.betaPP == 0.0


@dataclass(frozen=True)
class SigmaParams:
    """Cartesian couplings of the same Hamiltonian.

    H = i sz Lz + sx Lx + sy Ly + szz Lz^2 + sxx Lx^2 + syy Ly^2
        + sxy (LxLy + LyLx) + i sxz Lx Lz + i syz Ly Lz
    """

    sx: float = 0.0
    sy: float = 0.0
    sz: float = 0.0
    sxx: float = 0.0
    syy: float = 0.0
    szz: float = 0.0
    sxy: float = 0.0
    sxz: float = 0.0
    syz: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def to_sigma(p: QuadHamiltonianParams) -> SigmaParams:
    return SigmaParams(
        sx=2.0 * p.alphaP,
        sy=-2.0 * p.betaP,
        sz=p.beta0,
        sxx=2.0 * (p.alphaPM + p.alphaPP),
        syy=2.0 * (p.alphaPM - p.alphaPP),
        szz=p.alpha00,
        sxy=-2.0 * p.betaPP,
        sxz=2.0 * p.betaP0,
        syz=2.0 * p.alphaP0,
    )


def from_sigma(s: SigmaParams) -> QuadHamiltonianParams:
    return QuadHamiltonianParams(
        beta0=s.sz,
        alphaP=s.sx / 2.0,
        betaP=-s.sy / 2.0,
        alpha00=s.szz,
        alphaP0=s.syz / 2.0,
        betaP0=s.sxz / 2.0,
        alphaPP=(s.sxx - s.syy) / 4.0,
        betaPP=-s.sxy / 2.0,
        alphaPM=(s.sxx + s.syy) / 4.0,
    )


def build_hamiltonian(p: QuadHamiltonianParams, rep: SpinRepresentation) -> np.ndarray:
    """Assemble H term by term in the operator ordering of the family."""
    L0, Lp, Lm = rep.L0, rep.Lplus, rep.Lminus
    h = 1j * p.beta0 * L0
    h = h + (p.alphaP + 1j * p.betaP) * Lp + (p.alphaP - 1j * p.betaP) * Lm
    h = h + p.alpha00 * (L0 @ L0)
    h = h + (p.alphaP0 + 1j * p.betaP0) * (Lp @ L0)
    h = h - (p.alphaP0 - 1j * p.betaP0) * (Lm @ L0)
    h = h + (p.alphaPP + 1j * p.betaPP) * (Lp @ Lp) + (p.alphaPP - 1j * p.betaPP) * (Lm @ Lm)
    h = h + p.alphaPM * (Lp @ Lm + Lm @ Lp)
    return np.asarray(h, dtype=complex)


class Check(NamedTuple):
    passed: bool
    residual: float


def _require_square(h: np.ndarray, rep: SpinRepresentation) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape != (rep.dim, rep.dim):
        raise ValueError(f"matrix shape {h.shape} does not match representation dimension {rep.dim}")
    return h


def flip_matrix(rep: SpinRepresentation) -> np.ndarray:
    """Anti-diagonal permutation J|l,m> = |l,-m>.

    Combined with complex conjugation it realizes L0 -> -L0, L+ <-> L-.
    """
    return np.eye(rep.dim)[::-1].astype(complex)


def check_antilinear_symmetry(h: np.ndarray, rep: SpinRepresentation, tol: float = 1e-12) -> Check:
    """Residual of J conj(H) J - H."""
    h = _require_square(h, rep)
    j = flip_matrix(rep)
    r = residual_norm(j @ h.conj() @ j - h)
    return Check(r <= tol, r)


def check_casimir_commutes(h: np.ndarray, rep: SpinRepresentation, tol: float = 1e-12) -> Check:
    """Residual of [H, L^2]."""
    h = _require_square(h, rep)
    r = residual_norm(commutator(h, rep.casimir()))
    return Check(r <= tol, r)


def algebra_residuals(rep: SpinRepresentation) -> dict[str, float]:
    """Residuals of the su(2) relations and of the Casimir value."""
    L0, Lp, Lm = rep.L0, rep.Lplus, rep.Lminus
    l = rep.two_l / 2.0
    return {
        "[L0,L+]-L+": residual_norm(commutator(L0, Lp) - Lp),
        "[L0,L-]+L-": residual_norm(commutator(L0, Lm) + Lm),
        "[L+,L-]-2L0": residual_norm(commutator(Lp, Lm) - 2 * L0),
        "L+-adj(L-)": residual_norm(Lp - Lm.conj().T),
        "casimir": residual_norm(rep.casimir() - l * (l + 1) * rep.identity()),
    }
