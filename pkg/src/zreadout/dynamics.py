"""Linearized cavity response, SNR accumulation, and homodyne sampling.

In the longitudinal readout the two qubit states displace the cavity
symmetrically.  With the cavity frame linearized around the drive, the
excited-state amplitude obeys

    d alpha_e / dt = -(kappa/2) alpha_e - i g_c(t),      alpha_g = -alpha_e,

whose solution is the exponentially filtered integral

    alpha_e(t) = -i exp(-kappa t / 2) * integral_0^t g_c(tau) exp(kappa tau / 2) dtau.

Everything downstream is built from X(t) = |alpha_e|: photon number
N = X**2, output separation d_out = 2 sqrt(kappa) X, and the integrated
signal-to-noise ratio

    SNR(t) = sqrt(eta * kappa) * integral_0^t d_out dtau / sqrt(S_eff * t),

with SNR(0) = 0 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import erfc, sqrt

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .params import SystemParams

__all__ = [
    "Trajectory",
    "HomodyneSample",
    "excited_amplitude",
    "cumulative_snr",
    "propagate",
    "ode_oracle",
    "snr_series",
    "sample_homodyne",
]


def _check_grid_shape(gc_values: np.ndarray, params: SystemParams) -> np.ndarray:
    gc = np.asarray(gc_values, dtype=float)
    if gc.shape[0] != params.n_grid:
        raise ValueError(
            f"gc_values has {gc.shape[0]} samples but params.n_grid is {params.n_grid}"
        )
    return gc


def excited_amplitude(gc_values: np.ndarray, params: SystemParams) -> np.ndarray:
    """Magnitude X(t) of the excited-state amplitude, so alpha_e = -i X.

    Accepts a single waveform of shape (n_grid,) or a batch of columns
    (n_grid, m); the integral is evaluated with the cumulative trapezoid
    rule on the uniform grid.
    """
    gc = _check_grid_shape(gc_values, params)
    t = params.grid()
    growth = np.exp(0.5 * params.kappa * t)
    decay = np.exp(-0.5 * params.kappa * t)
    if gc.ndim == 2:
        growth = growth[:, None]
        decay = decay[:, None]
    integral = cumulative_trapezoid(gc * growth, t, initial=0.0, axis=0)
    return decay * integral


def cumulative_snr(d_out: np.ndarray, grid: np.ndarray, params: SystemParams) -> np.ndarray:
    """SNR(t) accumulated from the output separation; SNR(0) = 0."""
    d = np.asarray(d_out, dtype=float)
    t = grid if d.ndim == 1 else grid[:, None]
    signal = np.sqrt(params.eta * params.kappa) * cumulative_trapezoid(
        np.abs(d), grid, initial=0.0, axis=0
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        snr = signal / np.sqrt(params.s_eff * t)
    snr[0] = 0.0
    return snr


@dataclass(frozen=True)
class Trajectory:
    """Propagated readout record on the time grid."""

    grid: np.ndarray
    alpha_e: np.ndarray
    photon: np.ndarray
    d_out: np.ndarray
    snr: np.ndarray

    @property
    def alpha_g(self) -> np.ndarray:
        return -self.alpha_e

    @property
    def peak_photon(self) -> float:
        return float(np.max(self.photon))

    @property
    def snr_tf(self) -> float:
        return float(self.snr[-1])


def _trajectory_from_alpha(alpha_e: np.ndarray, params: SystemParams) -> Trajectory:
    grid = params.grid()
    mag = np.abs(alpha_e)
    photon = mag**2
    d_out = 2.0 * np.sqrt(params.kappa) * mag
    snr = cumulative_snr(d_out, grid, params)
    return Trajectory(grid=grid, alpha_e=alpha_e, photon=photon, d_out=d_out, snr=snr)


def propagate(gc_values: np.ndarray, params: SystemParams) -> Trajectory:
    """Closed-form linear response of the cavity to the drive g_c."""
    gc = _check_grid_shape(gc_values, params)
    if gc.ndim != 1:
        raise ValueError("propagate expects a single waveform; see excited_amplitude for batches")
    x = excited_amplitude(gc, params)
    return _trajectory_from_alpha(-1j * x, params)


def ode_oracle(gc_values: np.ndarray, params: SystemParams) -> Trajectory:
    """Fixed-step RK4 integration of d alpha/dt = -(kappa/2) alpha - i g_c.

    Independent cross-check for :func:`propagate`; drive values between
    grid points are linearly interpolated (midpoint average per step).
    """
    gc = _check_grid_shape(gc_values, params)
    if gc.ndim != 1:
        raise ValueError("ode_oracle expects a single waveform")
    t = params.grid()
    half_kappa = 0.5 * params.kappa

    def rhs(g_val: float, a: complex) -> complex:
        return -half_kappa * a - 1j * g_val

    alpha = np.zeros(params.n_grid, dtype=complex)
    for i in range(params.n_grid - 1):
        h = t[i + 1] - t[i]
        g_mid = 0.5 * (gc[i] + gc[i + 1])
        a = alpha[i]
        k1 = rhs(gc[i], a)
        k2 = rhs(g_mid, a + 0.5 * h * k1)
        k3 = rhs(g_mid, a + 0.5 * h * k2)
        k4 = rhs(gc[i + 1], a + h * k3)
        alpha[i + 1] = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return _trajectory_from_alpha(alpha, params)


def snr_series(traj: Trajectory, params: SystemParams) -> np.ndarray:
    """Recompute the integrated SNR from a trajectory's output record."""
    return cumulative_snr(traj.d_out, traj.grid, params)


@dataclass(frozen=True)
class HomodyneSample:
    """Monte-Carlo integrated homodyne records for the two qubit states.

    Each shot integrates the output over the full window, giving Gaussian
    records with means +/- mean_sep / 2 and standard deviation sigma.
    """

    record_g: np.ndarray
    record_e: np.ndarray
    mean_sep: float
    sigma: float

    @property
    def shots(self) -> int:
        return len(self.record_e)

    @property
    def snr(self) -> float:
        return self.mean_sep / self.sigma

    @property
    def assignment_error(self) -> float:
        """Overlap error of the two Gaussians under a midpoint threshold."""
        return 0.5 * erfc(self.mean_sep / (2.0 * sqrt(2.0) * self.sigma))


def sample_homodyne(
    traj: Trajectory,
    params: SystemParams,
    shots: int,
    seed: int | np.random.Generator = 0,
) -> HomodyneSample:
    """Draw integrated homodyne records for both qubit states.

    The record separation equals sqrt(eta * kappa) * integral d_out dt and
    the per-record noise variance is S_eff * t_f, so mean_sep / sigma
    reproduces SNR(t_f).
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    mean_sep = float(
        np.sqrt(params.eta * params.kappa) * np.trapezoid(np.abs(traj.d_out), traj.grid)
    )
    sigma = float(np.sqrt(params.s_eff * traj.grid[-1]))
    record_e = 0.5 * mean_sep + sigma * rng.standard_normal(shots)
    record_g = -0.5 * mean_sep + sigma * rng.standard_normal(shots)
    return HomodyneSample(record_g=record_g, record_e=record_e, mean_sep=mean_sep, sigma=sigma)
