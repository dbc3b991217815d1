"""Shortcut-to-adiabaticity seed pulse and its calibration.

The seed drive is the smooth polynomial bump

    g_c(t) = -(70 pi / (kappa t_f^7)) * g_z0 * t^3 (t - t_f)^3,

which is positive on (0, t_f) (the bracket is cubed and negative) and has
vanishing value, slope and curvature at both endpoints.  Calibration is a
two-step rescaling: first the base amplitude g_z0_base is propagated to
find the peak photon number N_seed it reaches; then the amplitude is
scaled by s = sqrt(N_max / N_seed) so the seed grazes the photon cap,
using the fact that the linear response makes N scale as the squared
amplitude.  A second, independent calibration fixes the noise floor
S_eff so the rescaled seed ends at a target SNR, making all later SNR
comparisons calibration-free ratios.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import pi

import numpy as np

from . import dynamics
from .params import SystemParams
from .splines import SplineBasis, SplinePulse, fit_spline_to_function

__all__ = [
    "SeedSpec",
    "SeedFit",
    "seed_gc",
    "seed_gz",
    "calibrate_seed",
    "calibrate_s_eff",
    "seed_coefficients",
]


@dataclass(frozen=True)
class SeedSpec:
    """Seed amplitude bookkeeping.

    gz0_base is the uncalibrated amplitude; n_seed, scale_s and gz0 are
    filled in by :func:`calibrate_seed` (gz0 = scale_s * gz0_base).
    """

    gz0_base: float
    n_max: float = 50.0
    n_seed: float | None = None
    scale_s: float | None = None
    gz0: float | None = None

    def __post_init__(self) -> None:
        if not self.gz0_base > 0:
            raise ValueError("gz0_base > 0")
        if not self.n_max > 0:
            raise ValueError("n_max > 0")

    @property
    def calibrated(self) -> bool:
        return self.gz0 is not None


def _amplitude(spec: SeedSpec) -> float:
    return spec.gz0 if spec.gz0 is not None else spec.gz0_base


def seed_gc(spec: SeedSpec, params: SystemParams, grid: np.ndarray) -> np.ndarray:
    """Seed drive waveform; uses the calibrated amplitude when present."""
    t = np.asarray(grid, dtype=float)
    t_f = params.t_f
    prefactor = -70.0 * pi * _amplitude(spec) / (params.kappa * t_f**7)
    return prefactor * t**3 * (t - t_f) ** 3


def _seed_gc_ddot(spec: SeedSpec, params: SystemParams, grid: np.ndarray) -> np.ndarray:
    # d^2/dt^2 [t^3 (t-t_f)^3] = 6 t (t-t_f)^3 + 18 t^2 (t-t_f)^2 + 6 t^3 (t-t_f)
    t = np.asarray(grid, dtype=float)
    t_f = params.t_f
    prefactor = -70.0 * pi * _amplitude(spec) / (params.kappa * t_f**7)
    d = t - t_f
    return prefactor * (6.0 * t * d**3 + 18.0 * t**2 * d**2 + 6.0 * t**3 * d)


def seed_gz(spec: SeedSpec, params: SystemParams, grid: np.ndarray) -> np.ndarray:
    """Longitudinal coupling that realizes the seed drive, from the
    inverse-engineering map g_z = g_c + g_c''/omega_r**2 (analytic)."""
    return seed_gc(spec, params, grid) + _seed_gc_ddot(spec, params, grid) / params.omega_r**2


def calibrate_seed(spec: SeedSpec, params: SystemParams) -> SeedSpec:
    """Propagate the base-amplitude seed and rescale it to the photon cap."""
    base = replace(spec, n_seed=None, scale_s=None, gz0=None)
    traj = dynamics.propagate(seed_gc(base, params, params.grid()), params)
    n_seed = traj.peak_photon
    if not n_seed > 0:
        raise RuntimeError("seed calibration failed: base seed reaches zero peak photon")
    scale_s = float(np.sqrt(spec.n_max / n_seed))
    return replace(spec, n_seed=float(n_seed), scale_s=scale_s, gz0=scale_s * spec.gz0_base)


def calibrate_s_eff(
    spec: SeedSpec, params: SystemParams, target_snr: float = 3.8
) -> SystemParams:
    """Rescale the noise density so the calibrated seed ends at target_snr.

    SNR scales as 1 / sqrt(S_eff), so one propagation under the current
    S_eff fixes the rescaling exactly.
    """
    if not spec.calibrated:
        raise ValueError("calibrate_seed must run before calibrate_s_eff")
    if not target_snr > 0:
        raise ValueError("target_snr > 0")
    traj = dynamics.propagate(seed_gc(spec, params, params.grid()), params)
    snr = traj.snr_tf
    if not snr > 0:
        raise RuntimeError("noise calibration failed: seed SNR is zero")
    return replace(params, s_eff=params.s_eff * (snr / target_snr) ** 2)


@dataclass(frozen=True)
class SeedFit:
    """Spline projection of the calibrated seed, with fidelity metrics."""

    pulse: SplinePulse
    residual_rms: float
    snr_seed: float
    snr_fit: float

    @property
    def snr_gap(self) -> float:
        return abs(self.snr_fit - self.snr_seed)


def seed_coefficients(spec: SeedSpec, basis: SplineBasis, params: SystemParams) -> SeedFit:
    """Project the calibrated seed onto the clamped spline basis and report
    how faithfully the projection reproduces the waveform and its SNR."""
    if not spec.calibrated:
        raise ValueError("calibrate_seed must run before seed_coefficients")
    grid = params.grid()
    target = seed_gc(spec, params, grid)
    fit = fit_spline_to_function(target, basis, grid)
    snr_seed = dynamics.propagate(target, params).snr_tf
    snr_fit = dynamics.propagate(fit.pulse.basis.matrix(grid) @ fit.pulse.coeffs, params).snr_tf
    return SeedFit(
        pulse=fit.pulse,
        residual_rms=fit.residual_rms,
        snr_seed=snr_seed,
        snr_fit=snr_fit,
    )
