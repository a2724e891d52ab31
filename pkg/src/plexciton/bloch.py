"""Optical Bloch equations for one resonantly driven dressed transition.

Under strong hybridization the two branches are spectrally well separated, so
a laser tuned to one of them drives an isolated two-level transition between
the ground state and that branch.  In the frame rotating at the laser
frequency the state is ``(p_ee, coh_re, coh_im)``: the excited population and
the real and imaginary parts of the ground-excited coherence.

Convention (fixed by requiring the weak-drive stationary population
``2 Omega**2 / (gperp * gpar)`` at zero detuning):

    d p_ee / dt = -gpar * p_ee + 2 * Omega * coh_im
    d coh  / dt = -(gperp - i * detuning) * coh + i * Omega * (1 - 2 * p_ee)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .integrate import evolve_linear

STEP_SAFETY = 0.1

_POSITIVITY_SLACK = 1e-9


@dataclass(frozen=True)
class BlochState:
    """Two-level density matrix in the rotating frame, plus the detuning."""

    p_ee: float
    coh_re: float
    coh_im: float
    detuning: float = 0.0

    def __post_init__(self) -> None:
        if not (-_POSITIVITY_SLACK <= self.p_ee <= 1.0 + _POSITIVITY_SLACK):
            raise ParameterError(f"p_ee = {self.p_ee} outside [0, 1]")
        coh2 = self.coh_re ** 2 + self.coh_im ** 2
        if coh2 > self.p_ee * (1.0 - self.p_ee) + _POSITIVITY_SLACK:
            raise ParameterError(
                f"|coherence|^2 = {coh2} violates density-matrix positivity"
            )


def bloch_derivative(state: BlochState, omega_l_rabi: float, gpar_b: float,
                     gperp_b: float) -> tuple[float, float, float]:
    """Time derivative ``(dp_ee, dcoh_re, dcoh_im)`` at the given state."""
    p, u, v = state.p_ee, state.coh_re, state.coh_im
    d = state.detuning
    return (
        -gpar_b * p + 2.0 * omega_l_rabi * v,
        -gperp_b * u - d * v,
        d * u - gperp_b * v + omega_l_rabi * (1.0 - 2.0 * p),
    )


def bloch_steady_state(omega_l_rabi: float, gpar_b: float, gperp_b: float,
                       detuning: float = 0.0) -> BlochState:
    """Exact stationary point of the driven two-level dynamics.

    With the saturation parameter
    ``s = 2 * Omega**2 * gperp / (gpar * (gperp**2 + detuning**2))`` the
    stationary population is ``s / (1 + 2 s)``: it reduces to
    ``2 Omega**2 / (gperp * gpar)`` for weak resonant driving and saturates
    monotonically at one half.
    """
    if not (gpar_b > 0.0 and gperp_b > 0.0):
        raise ParameterError(
            f"branch rates must be positive, got gpar={gpar_b}, gperp={gperp_b}"
        )
    if omega_l_rabi == 0.0:
        return BlochState(0.0, 0.0, 0.0, detuning)
    lorentz = gperp_b ** 2 + detuning ** 2
    s = 2.0 * omega_l_rabi ** 2 * gperp_b / (gpar_b * lorentz)
    p = s / (1.0 + 2.0 * s)
    pref = omega_l_rabi * (1.0 - 2.0 * p) / lorentz
    return BlochState(p, -detuning * pref, gperp_b * pref, detuning)


def _bloch_augmented_matrix(omega_l_rabi: float, gpar_b: float, gperp_b: float,
                            detuning: float) -> np.ndarray:
    # Affine system lifted to linear form with a constant fourth coordinate.
    return np.array([
        [-gpar_b, 0.0, 2.0 * omega_l_rabi, 0.0],
        [0.0, -gperp_b, -detuning, 0.0],
        [-2.0 * omega_l_rabi, detuning, -gperp_b, omega_l_rabi],
        [0.0, 0.0, 0.0, 0.0],
    ])


def evolve_bloch(initial: BlochState, omega_l_rabi: float, gpar_b: float,
                 gperp_b: float, tau_grid: np.ndarray) -> np.ndarray:
    """Integrate the Bloch equations; rows are ``(p_ee, coh_re, coh_im)``."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid.ndim != 1 or tau_grid.size == 0:
        raise ParameterError("tau_grid must be a non-empty 1-d array")
    if tau_grid[0] < 0.0 or np.any(np.diff(tau_grid) <= 0.0):
        raise ParameterError("tau_grid must be nonnegative and increasing")
    fastest = max(gpar_b, gperp_b, 2.0 * omega_l_rabi, abs(initial.detuning))
    if fastest <= 0.0:
        return np.tile([initial.p_ee, initial.coh_re, initial.coh_im],
                       (tau_grid.size, 1))
    a = _bloch_augmented_matrix(omega_l_rabi, gpar_b, gperp_b, initial.detuning)
    x0 = np.array([initial.p_ee, initial.coh_re, initial.coh_im, 1.0])
    states = evolve_linear(a, x0, tau_grid, STEP_SAFETY / fastest)
    return states[:, :3]


def regression_g2_resonant_numeric(omega_l_rabi: float, gpar_b: float,
                                   gperp_b: float,
                                   tau_grid: np.ndarray) -> np.ndarray:
    """Normalized two-photon coincidence of a resonantly driven branch.

    A detection projects the transition to its ground state, so the
    coincidence is the re-excitation transient divided by the stationary
    population: ``g2(tau) = p_ee(tau | ground) / p_ee(inf)``.  Exact
    resonance (zero detuning) is assumed.
    """
    if not (omega_l_rabi > 0.0):
        raise ParameterError(f"drive amplitude must be positive, got {omega_l_rabi}")
    stationary = bloch_steady_state(omega_l_rabi, gpar_b, gperp_b).p_ee
    states = evolve_bloch(BlochState(0.0, 0.0, 0.0), omega_l_rabi,
                          gpar_b, gperp_b, tau_grid)
    return states[:, 0] / stationary
