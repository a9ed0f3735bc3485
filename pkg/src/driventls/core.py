"""Shared types and conventions for the driven two-level system.

All modules work in the dimensionless phase variable tau = omega_L * t, so
one drive period is T = 2*pi and every energy is measured in units of the
drive photon energy.  The basis ordering is (|1>, |2>) = (ground, excited)
throughout, which fixes sigma_z = |2><2| - |1><1| = diag(-1, +1).  Mixing
conventions is the classic source of sign errors in this problem, so the
Pauli-type operators are defined here once and imported everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DrivenTLSError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DrivenTLSError, ValueError):
    """Physical parameters outside their allowed domain."""


class DomainError(DrivenTLSError, ValueError):
    """Operation argument outside its allowed domain."""


class AccuracyError(DrivenTLSError, RuntimeError):
    """A numerical result failed to meet its accuracy contract."""


class ClassificationError(DrivenTLSError, RuntimeError):
    """A symmetry classification came out ambiguous."""


def _frozen(matrix: list[list[complex]]) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    m.setflags(write=False)
    return m


IDENTITY = _frozen([[1, 0], [0, 1]])
# sigma_z = |2><2| - |1><1|, diag(-1, +1) in the (ground, excited) ordering
SIGMA_Z = _frozen([[-1, 0], [0, 1]])
# sigma_minus = |1><2| lowers, sigma_plus = |2><1| raises
SIGMA_MINUS = _frozen([[0, 1], [0, 0]])
SIGMA_PLUS = _frozen([[0, 0], [1, 0]])
# sigma_x = sigma_minus + sigma_plus, the drive coupling and dipole operator
SIGMA_X = _frozen([[0, 1], [1, 0]])


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters of the driven two-level system.

    Arguments:
        delta: transition frequency over drive frequency, >= 0.
        rabi: Rabi frequency over drive frequency, >= 0.
        dipole: dipole matrix element mu; intensities scale as mu**2.
    """

    delta: float
    rabi: float
    dipole: float = 1.0

    def __post_init__(self) -> None:
        for name in ("delta", "rabi", "dipole"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite real number, got {value!r}")
        if self.delta < 0:
            raise ParameterError(f"delta must be >= 0, got {self.delta}")
        if self.rabi < 0:
            raise ParameterError(f"rabi must be >= 0, got {self.rabi}")
        if self.dipole <= 0:
            raise ParameterError(f"dipole must be > 0, got {self.dipole}")

    @classmethod
    def from_zeta(cls, delta: float, zeta: float, dipole: float = 1.0) -> SystemParams:
        """Construct from the coupling zeta = 2*rabi instead of rabi."""
        return cls(delta=delta, rabi=zeta / 2.0, dipole=dipole)

    @property
    def zeta(self) -> float:
        """Coupling parameter zeta = 2*rabi, the Bessel argument everywhere."""
        return 2.0 * self.rabi

    @property
    def epsilon_eff(self) -> float:
        """Diagnostic size of the perturbative parameter.

        Interpolates between delta (weak drive) and delta*sqrt(2/(pi*zeta))
        (strong drive).  Used only for tolerances and reporting, never inside
        physics formulas.
        """
        if self.zeta > 0:
            return self.delta * min(1.0, math.sqrt(2.0 / (math.pi * self.zeta)))
        return self.delta


def hamiltonian_at(params: SystemParams, tau: float) -> np.ndarray:
    """Hamiltonian (delta/2)(|2><2|-|1><1|) - rabi*cos(tau)*sigma_x at phase tau.

    Returns a Hermitian traceless 2x2 complex array; the diagonal is
    (-delta/2, +delta/2) and the off-diagonal coupling is -rabi*cos(tau).
    """
    if not math.isfinite(tau):
        raise DomainError(f"tau must be finite, got {tau!r}")
    half = 0.5 * params.delta
    coupling = -params.rabi * math.cos(tau)
    return np.array([[-half, coupling], [coupling, half]], dtype=complex)


def pauli_combination(az: float, ap: complex) -> np.ndarray:
    """Hermitian matrix az*sigma_z + ap*sigma_minus + conj(ap)*sigma_plus."""
    return np.array([[-az, ap], [np.conj(ap), az]], dtype=complex)


def su2_exponential(az: float, ap: complex) -> np.ndarray:
    """exp(i*(az*sigma_z + ap*sigma_minus + conj(ap)*sigma_plus)) in closed form.

    For a Hermitian traceless generator M with |M| eigenvalues +-r the
    exponential is cos(r)*I + i*sin(r)/r * M, which is exact and branch-free.
    """
    r = math.sqrt(az * az + abs(ap) ** 2)
    c = math.cos(r)
    s = math.sin(r) / r if r > 0 else 1.0
    return np.array(
        [[c - 1j * s * az, 1j * s * ap], [1j * s * np.conj(ap), c + 1j * s * az]],
        dtype=complex,
    )


def tau_grid(n: int) -> np.ndarray:
    """Uniform phase grid tau_k = 2*pi*k/n, k = 0..n-1 (endpoint excluded)."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"grid size must be a positive integer, got {n!r}")
    return 2.0 * math.pi * np.arange(n) / n


def unitarity_defect(u: np.ndarray) -> float:
    """Max-norm deviation of U^dagger U from the identity."""
    return float(np.max(np.abs(u.conj().T @ u - IDENTITY)))
