"""Closed-form first-order results for the driven two-level system.

The strong-drive treatment rotates away the coupling term exactly and
treats the detuning as the perturbation.  Everything downstream is built
from the oscillating rotation angle phi(tau) = (zeta/2) sin(tau) and from
Fourier series in the Bessel coefficients J_n(zeta): the even-harmonic
antiderivative xi_s, the odd-harmonic antiderivative xi_a, and the phase
function eta assembled from them.  The results are first order in the
detuning delta; errors scale as delta**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_row, series_cutoff
from .core import (
    IDENTITY,
    DomainError,
    SystemParams,
    pauli_combination,
    su2_exponential,
    tau_grid,
)
from .floquet import FloquetMode, QuasienergyPair, classify_parity, fold_quasienergy


def _as_tau_array(tau) -> np.ndarray:
    t = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("tau must be finite")
    return t


def _unwrap(tau, out):
    # scalar in, scalar out; arrays pass through
    if np.ndim(tau) == 0:
        return out.item()
    return out


def phi(params: SystemParams, tau):
    """Oscillating rotation angle (zeta/2)*sin(tau) of the drive frame."""
    t = _as_tau_array(tau)
    return _unwrap(tau, params.rabi * np.sin(t))


def _coefficient_row(params: SystemParams) -> np.ndarray:
    zeta = params.zeta
    return bessel_row(series_cutoff(zeta), zeta).values


def _xi_s_from_row(row: np.ndarray, t: np.ndarray) -> np.ndarray:
    ns = np.arange(2, row.size, 2)
    return np.sin(np.multiply.outer(t, ns)) @ (row[ns] / ns)


def _xi_a_from_row(row: np.ndarray, t: np.ndarray) -> np.ndarray:
    ns = np.arange(1, row.size, 2)
    return np.cos(np.multiply.outer(t, ns)) @ (row[ns] / ns)


def xi_s(params: SystemParams, tau):
    """Even-harmonic series sum_{n>=1} J_2n(zeta) sin(2n tau)/(2n).

    Antiderivative of (cos(zeta sin tau) - J_0(zeta))/2; symmetric under a
    half-period shift.
    """
    t = _as_tau_array(tau)
    return _unwrap(tau, _xi_s_from_row(_coefficient_row(params), t))


def xi_a(params: SystemParams, tau):
    """Odd-harmonic series sum_{n>=0} J_{2n+1}(zeta) cos((2n+1) tau)/(2n+1).

    Antiderivative of -sin(zeta sin tau)/2 up to the constant xi_a(0);
    antisymmetric under a half-period shift.
    """
    t = _as_tau_array(tau)
    return _unwrap(tau, _xi_a_from_row(_coefficient_row(params), t))


def alpha(params: SystemParams, tau):
    """Zero-mean even-harmonic part of cos(2 phi): cos(zeta sin tau) - J_0."""
    t = _as_tau_array(tau)
    row = _coefficient_row(params)
    ns = np.arange(2, row.size, 2)
    return _unwrap(tau, 2.0 * (np.cos(np.multiply.outer(t, ns)) @ row[ns]))


def beta_over_i(params: SystemParams, tau):
    """Odd-harmonic series for sin(2 phi) = sin(zeta sin tau).

    The coupling coefficient itself is imaginary; this returns it divided
    by i, which is real.
    """
    t = _as_tau_array(tau)
    row = _coefficient_row(params)
    ns = np.arange(1, row.size, 2)
    return _unwrap(tau, 2.0 * (np.sin(np.multiply.outer(t, ns)) @ row[ns]))


def eta(params: SystemParams, tau):
    """Complex phase function i*(xi_a(0) - exp(-i delta J_0 tau) xi_a(tau))."""
    t = _as_tau_array(tau)
    row = _coefficient_row(params)
    xa0 = _xi_a_from_row(row, np.asarray(0.0))
    xa = _xi_a_from_row(row, t)
    j0 = bessel_j(0, params.zeta)
    out = 1j * (xa0 - np.exp(-1j * params.delta * j0 * t) * xa)
    return _unwrap(tau, out)


@dataclass(frozen=True)
class AuxiliaryFunctions:
    """All closed-form coefficient functions evaluated at one phase."""

    phi: float
    xi_s: float
    xi_a: float
    alpha: float
    beta_over_i: float
    eta: complex


def auxiliary_functions(params: SystemParams, tau: float) -> AuxiliaryFunctions:
    """Evaluate every coefficient function at a single phase tau."""
    if np.ndim(tau) != 0:
        raise DomainError("tau must be a scalar")
    t = float(tau)
    return AuxiliaryFunctions(
        phi=phi(params, t),
        xi_s=xi_s(params, t),
        xi_a=xi_a(params, t),
        alpha=alpha(params, t),
        beta_over_i=beta_over_i(params, t),
        eta=eta(params, t),
    )


def analytic_quasienergies(params: SystemParams) -> QuasienergyPair:
    """First-order quasienergies -(delta/2) J_0(zeta) and +(delta/2) J_0(zeta).

    Mode 1 is the one connected to the ground state at zero drive.  Both
    values are folded into (-1/2, 1/2].
    """
    e = 0.5 * params.delta * bessel_j(0, params.zeta)
    return QuasienergyPair(fold_quasienergy(-e), fold_quasienergy(e))


def _raw_state(params: SystemParams, label: int, t: np.ndarray) -> np.ndarray:
    row = _coefficient_row(params)
    ph = params.rabi * np.sin(t)
    xs = _xi_s_from_row(row, t)
    xa = _xi_a_from_row(row, t)
    c, s = np.cos(ph), np.sin(ph)
    d = params.delta
    if label == 1:
        c1 = c + 1j * d * (xs * c - xa * s)
        c2 = 1j * (s + 1j * d * (xs * s + xa * c))
    else:
        c1 = 1j * (s - 1j * d * (xs * s + xa * c))
        c2 = c - 1j * d * (xs * c - xa * s)
    return np.stack([c1, c2], axis=-1)


def analytic_floquet_state(params: SystemParams, label: int, tau) -> np.ndarray:
    """First-order Floquet mode spinor at phase tau.

    Arguments:
        params: system parameters.
        label: 1 for the symmetric mode (ground-state-like at weak drive),
            2 for the antisymmetric one.
        tau: scalar or array of phases.

    Returns:
        Unit-norm spinor(s), shape (..., 2).  The global phase makes the
        largest component at tau = 0 real positive (ties toward the first
        component), so states are directly comparable to the exact solver.
    """
    if label not in (1, 2):
        raise DomainError(f"mode label must be 1 or 2, got {label!r}")
    t = _as_tau_array(tau)
    out = _raw_state(params, label, np.atleast_1d(t))
    out = out / np.linalg.norm(out, axis=-1, keepdims=True)

    anchor = _raw_state(params, label, np.asarray([0.0]))[0]
    idx = 0 if abs(anchor[0]) >= abs(anchor[1]) else 1
    out = out * (anchor[idx].conjugate() / abs(anchor[idx]))
    if np.ndim(tau) == 0:
        return out[0]
    return out


def analytic_evolution(params: SystemParams, tau: float) -> np.ndarray:
    """First-order evolution operator from phase 0 to tau, exactly unitary.

    Product of the drive-frame rotation, the averaged-detuning phase, and
    the closed-form exponential of the first-order correction.  Agrees with
    the exact propagator to O(delta**2) in operator norm.
    """
    if np.ndim(tau) != 0:
        raise DomainError("tau must be a scalar")
    t = float(tau)
    if not math.isfinite(t):
        raise DomainError("tau must be finite")
    d = params.delta
    ph = params.rabi * math.sin(t)
    j0 = bessel_j(0, params.zeta)
    frame = np.array(
        [[math.cos(ph), 1j * math.sin(ph)], [1j * math.sin(ph), math.cos(ph)]],
        dtype=complex,
    )
    mean_phase = np.array(
        [[np.exp(0.5j * d * j0 * t), 0.0], [0.0, np.exp(-0.5j * d * j0 * t)]],
        dtype=complex,
    )
    correction = su2_exponential(-d * xi_s(params, t), d * eta(params, t))
    return frame @ mean_phase @ correction


def _evolution_linearized(params: SystemParams, tau: float) -> np.ndarray:
    # strictly first-order (non-unitary) variant, kept for tests comparing
    # the exponential resummation against the plain expansion
    d = params.delta
    t = float(tau)
    ph = params.rabi * math.sin(t)
    j0 = bessel_j(0, params.zeta)
    frame = np.array(
        [[math.cos(ph), 1j * math.sin(ph)], [1j * math.sin(ph), math.cos(ph)]],
        dtype=complex,
    )
    mean_phase = np.array(
        [[np.exp(0.5j * d * j0 * t), 0.0], [0.0, np.exp(-0.5j * d * j0 * t)]],
        dtype=complex,
    )
    linear = IDENTITY + 1j * pauli_combination(-d * xi_s(params, t), d * eta(params, t))
    return frame @ mean_phase @ linear


def analytic_modes(params: SystemParams, n_grid: int = 512) -> tuple[FloquetMode, FloquetMode]:
    """Both first-order modes sampled on the uniform period grid.

    Arguments:
        params: system parameters.
        n_grid: even sample count >= 64.

    Returns:
        (mode1, mode2) tagged source "analytic", directly comparable to the
        numeric modes from build_modes on the same grid.
    """
    if not isinstance(n_grid, (int, np.integer)) or n_grid < 64 or n_grid % 2 != 0:
        raise DomainError(f"n_grid must be an even integer >= 64, got {n_grid!r}")
    taus = tau_grid(n_grid)
    pair = analytic_quasienergies(params)
    modes = []
    for label in (1, 2):
        samples = analytic_floquet_state(params, label, taus)
        parity = classify_parity(samples)
        modes.append(FloquetMode(label, pair.for_label(label), samples, parity, "analytic"))
    return modes[0], modes[1]
