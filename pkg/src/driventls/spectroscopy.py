"""Emission and absorption lines between Floquet modes.

Transitions connect the replica states e^{i k tau} |mode_j> to |mode_i>;
the integer Fourier offset k plays the role of a net photon number.  Line
positions follow from the quasienergies, line strengths from matrix
elements of the dipole operator in the period-averaged inner product.  The
generalized parity of the modes forbids half of all (i, j, k) combinations
exactly: same-mode transitions need odd k, cross-mode transitions even k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import analytic_quasienergies
from .bessel import bessel_j
from .core import SIGMA_X, DomainError, SystemParams, tau_grid
from .floquet import FloquetMode, QuasienergyPair, build_modes
from .propagator import PropagationConfig


@dataclass(frozen=True)
class TransitionLine:
    """One spectral line between Floquet-mode manifolds.

    The final state is mode i in the reference manifold, the initial state
    is mode j offset by k drive quanta.  frequency is non-negative in units
    of the drive frequency; direction holds the sign of the underlying
    energy difference (+1 emission-side, -1 absorption-side, 0 degenerate).
    Intensities are in units of dipole**2.
    """

    i: int
    j: int
    k: int
    frequency: float
    intensity_numeric: float
    intensity_analytic: float
    line_class: str
    forbidden: bool
    direction: int

    @property
    def intensity(self) -> float:
        return self.intensity_numeric


def _check_label(label: int) -> None:
    if label not in (1, 2):
        raise DomainError(f"mode label must be 1 or 2, got {label!r}")


def _check_offset(k) -> None:
    if not isinstance(k, (int, np.integer)):
        raise DomainError(f"Fourier offset k must be an integer, got {k!r}")


def is_forbidden(i: int, j: int, k: int) -> bool:
    """Parity selection rule: allowed iff (i=j, k odd) or (i!=j, k even)."""
    _check_label(i)
    _check_label(j)
    _check_offset(k)
    if i == j:
        return k % 2 == 0
    return k % 2 != 0


def line_class(i: int, j: int, k: int) -> str:
    """Transition family: intra_manifold, hyper_raman, or odd_harmonic.

    Classifies by the (i, j, k) pattern alone; whether the line is actually
    allowed is tracked separately by is_forbidden.
    """
    _check_label(i)
    _check_label(j)
    _check_offset(k)
    if i == j:
        return "odd_harmonic"
    return "intra_manifold" if k == 0 else "hyper_raman"


def extended_inner(f: np.ndarray, g: np.ndarray) -> complex:
    """Period-averaged inner product (1/n) sum_tau <f(tau)|g(tau)>.

    Both arguments are spinor samples of shape (n, 2) on the same uniform
    grid over one period, n >= 64.  The rectangle rule is spectrally
    accurate for smooth periodic integrands.
    """
    fa = np.asarray(f, dtype=complex)
    ga = np.asarray(g, dtype=complex)
    if fa.shape != ga.shape:
        raise DomainError(f"grids differ: {fa.shape} vs {ga.shape}")
    if fa.ndim != 2 or fa.shape[1] != 2 or fa.shape[0] < 64:
        raise DomainError(f"samples must have shape (n >= 64, 2), got {fa.shape}")
    return complex(np.mean(np.sum(np.conj(fa) * ga, axis=1)))


def dipole_matrix_element(
    mode_i: FloquetMode, mode_j: FloquetMode, k: int, dipole: float
) -> complex:
    """Period-averaged matrix element of the dipole times e^{i k tau}.

    The dipole operator is dipole * (sigma_minus + sigma_plus); k offsets
    the initial state by k drive quanta.
    """
    _check_offset(k)
    if mode_i.n_samples != mode_j.n_samples:
        raise DomainError("modes must share the same sample grid")
    taus = tau_grid(mode_j.n_samples)
    driven = (dipole * np.exp(1j * k * taus))[:, None] * (mode_j.samples @ SIGMA_X)
    return extended_inner(mode_i.samples, driven)


def line_intensity_numeric(
    params: SystemParams,
    i: int,
    j: int,
    k: int,
    config: PropagationConfig | None = None,
    n_grid: int = 512,
) -> float:
    """Squared dipole matrix element between exact Floquet modes."""
    _check_label(i)
    _check_label(j)
    modes = build_modes(params, config, n_grid)
    by_label = {m.label: m for m in modes}
    element = dipole_matrix_element(by_label[i], by_label[j], k, params.dipole)
    return float(abs(element) ** 2)


def line_intensity_analytic(params: SystemParams, i: int, j: int, k: int) -> float:
    """Closed-form first-order line intensity in units of dipole**2.

    Cross-mode k = 0 lines carry the full dipole strength; every other
    allowed line is weaker by (delta * J_|k|(zeta) / k)**2; forbidden
    combinations return exactly 0.
    """
    if is_forbidden(i, j, k):
        return 0.0
    mu2 = params.dipole**2
    if k == 0:
        return mu2
    jk = bessel_j(abs(k), params.zeta)
    return mu2 * (params.delta * jk / k) ** 2


def transition_frequency(
    params: SystemParams, i: int, j: int, k: int, quasienergies: QuasienergyPair
) -> float:
    """Spectral position |eps_j - eps_i + k| in units of the drive frequency.

    The quasienergy pair may come from analytic_quasienergies or from the
    exact solver; params fixes the label convention being used.
    """
    _check_label(i)
    _check_label(j)
    _check_offset(k)
    del params
    return abs(quasienergies.for_label(j) - quasienergies.for_label(i) + k)


def spectrum(
    params: SystemParams,
    k_max: int,
    config: PropagationConfig | None = None,
    n_grid: int = 512,
    include_forbidden: bool = False,
) -> list[TransitionLine]:
    """All transitions ending in the reference manifold, sorted by frequency.

    Arguments:
        params: system parameters.
        k_max: include initial-state offsets |k| <= k_max, k_max >= 1.
        config: integrator settings for the exact modes.
        n_grid: sample grid for the matrix elements.
        include_forbidden: also emit parity-forbidden lines, whose numeric
            intensity quantifies the symmetry leakage of the solver.

    Returns:
        TransitionLine list.  Frequencies come from the first-order
        quasienergies, so degenerate doublets collapse exactly at the
        level-crossing drive strengths; intensities are computed both from
        the exact modes and from the closed-form formulas.
    """
    if not isinstance(k_max, (int, np.integer)) or k_max < 1:
        raise DomainError(f"k_max must be an integer >= 1, got {k_max!r}")
    pair = analytic_quasienergies(params)
    modes = build_modes(params, config, n_grid)
    by_label = {m.label: m for m in modes}
    lines = []
    for i in (1, 2):
        for j in (1, 2):
            for k in range(-k_max, k_max + 1):
                forbidden = is_forbidden(i, j, k)
                if forbidden and not include_forbidden:
                    continue
                signed = pair.for_label(j) - pair.for_label(i) + k
                element = dipole_matrix_element(by_label[i], by_label[j], k, params.dipole)
                lines.append(
                    TransitionLine(
                        i=i,
                        j=j,
                        k=k,
                        frequency=abs(signed),
                        intensity_numeric=float(abs(element) ** 2),
                        intensity_analytic=line_intensity_analytic(params, i, j, k),
                        line_class=line_class(i, j, k),
                        forbidden=forbidden,
                        direction=(signed > 0) - (signed < 0),
                    )
                )
    lines.sort(key=lambda line: (line.frequency, line.k, line.i, line.j))
    return lines
