"""Penalized SNR objective for pulse optimization.

The scalar reward for a coefficient vector c is

    R(c) = w_tf * ln(SNR(t_f) + eps)
         + w_avg * ln( (1/t_f) * integral (SNR(t) + eps) dt )
         - lambda_n * P_N - lambda_area * P_area - lambda_g * P_g

with soft constraint terms

    P_N    = (1/t_f) * integral max(0, N(t)/N_max - 1)^2 dt
    P_area = (integral |g_c| dt / A_seed - 1)^2
    P_g    = (1/t_f) * integral max(0, |g_z(t)|/g_max - 1)^2 dt   (if g_max is set)

P_area anchors the pulse area to the seed's area A_seed, which keeps the
log-SNR terms from being gamed by global amplitude rescaling.

:class:`RewardEvaluator` precomputes the basis matrices B, B'' and
B_z = B + B''/omega_r**2 on the time grid once, so scoring a batch of
coefficient vectors is a pair of matrix products plus cumulative
trapezoid integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .params import SystemParams
from .splines import SplineBasis, SplinePulse

__all__ = [
    "RewardWeights",
    "RewardBreakdown",
    "BatchScores",
    "RewardEvaluator",
    "reward_snr",
    "penalty_photon",
    "penalty_area",
    "penalty_coupling",
    "total_reward",
]


@dataclass(frozen=True)
class RewardWeights:
    """Reward weights and the seed-area anchor A_seed (same units as
    integral |g_c| dt)."""

    a_seed: float
    w_tf: float = 1.0
    w_avg: float = 0.5
    lambda_n: float = 10.0
    lambda_area: float = 1.0
    lambda_g: float = 10.0
    epsilon: float = 1e-3

    def __post_init__(self) -> None:
        if not self.a_seed > 0:
            raise ValueError("a_seed > 0")
        if not self.epsilon > 0:
            raise ValueError("epsilon > 0")
        for name in ("w_tf", "w_avg", "lambda_n", "lambda_area", "lambda_g"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} >= 0")


@dataclass(frozen=True)
class RewardBreakdown:
    """Scored pulse with the individual reward terms.

    total = r_snr - lambda_n * p_n - lambda_area * p_area - lambda_g * p_g
    holds exactly by construction.
    """

    total: float
    r_snr: float
    p_n: float
    p_area: float
    p_g: float
    snr_tf: float
    peak_photon: float
    peak_gz: float


@dataclass(frozen=True)
class BatchScores:
    """Vectorized reward terms for a batch of coefficient vectors."""

    total: np.ndarray
    r_snr: np.ndarray
    p_n: np.ndarray
    p_area: np.ndarray
    p_g: np.ndarray
    snr_tf: np.ndarray
    peak_photon: np.ndarray
    peak_gz: np.ndarray

    def row(self, i: int) -> RewardBreakdown:
        return RewardBreakdown(
            total=float(self.total[i]),
            r_snr=float(self.r_snr[i]),
            p_n=float(self.p_n[i]),
            p_area=float(self.p_area[i]),
            p_g=float(self.p_g[i]),
            snr_tf=float(self.snr_tf[i]),
            peak_photon=float(self.peak_photon[i]),
            peak_gz=float(self.peak_gz[i]),
        )


def _overshoot_penalty(values: np.ndarray, cap: float, grid: np.ndarray) -> np.ndarray:
    """(1/t_f) * integral max(0, values/cap - 1)^2 dt along axis 0."""
    excess = np.maximum(0.0, values / cap - 1.0)
    return np.trapezoid(excess**2, grid, axis=0) / grid[-1]


def _snr_reward(snr: np.ndarray, grid: np.ndarray, weights: RewardWeights) -> np.ndarray:
    terminal = np.log(snr[-1] + weights.epsilon)
    running = np.log(np.trapezoid(snr + weights.epsilon, grid, axis=0) / grid[-1])
    return weights.w_tf * terminal + weights.w_avg * running


def reward_snr(traj: dynamics.Trajectory, weights: RewardWeights, params: SystemParams) -> float:
    """Logarithmic SNR reward (terminal plus running-average term)."""
    return float(_snr_reward(traj.snr, traj.grid, weights))


def penalty_photon(traj: dynamics.Trajectory, params: SystemParams) -> float:
    """Quadratic overshoot of the photon number above n_max, time averaged."""
    return float(_overshoot_penalty(traj.photon, params.n_max, traj.grid))


def penalty_area(gc_values: np.ndarray, weights: RewardWeights, grid: np.ndarray) -> float:
    """Squared relative deviation of the pulse area from the seed area."""
    area = np.trapezoid(np.abs(gc_values), grid, axis=0)
    return float((area / weights.a_seed - 1.0) ** 2)


def penalty_coupling(gz_values: np.ndarray, params: SystemParams, grid: np.ndarray) -> float:
    """Quadratic overshoot of |g_z| above g_max; zero when g_max is unset."""
    if params.g_max is None:
        return 0.0
    return float(_overshoot_penalty(np.abs(gz_values), params.g_max, grid))


class RewardEvaluator:
    """Precomputed scorer mapping coefficient vectors to reward terms."""

    def __init__(self, basis: SplineBasis, params: SystemParams, weights: RewardWeights):
        if abs(basis.t_f - params.t_f) > 1e-12 * params.t_f:
            raise ValueError("basis and params disagree on t_f")
        self.basis = basis
        self.params = params
        self.weights = weights
        self.grid = params.grid()
        self.b_val = basis.matrix(self.grid)
        self.b_gz = self.b_val + basis.matrix(self.grid, deriv=2) / params.omega_r**2

    def scores(self, coeffs: np.ndarray) -> BatchScores:
        """Score a batch of coefficient rows, shape (m, n_basis)."""
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if c.shape[1] != self.basis.n_basis:
            raise ValueError(f"expected {self.basis.n_basis} coefficients per row")
        grid, params, weights = self.grid, self.params, self.weights

        gc = self.b_val @ c.T           # (n_grid, m)
        gz = self.b_gz @ c.T
        x = dynamics.excited_amplitude(gc, params)
        photon = x**2
        d_out = 2.0 * np.sqrt(params.kappa) * np.abs(x)
        snr = dynamics.cumulative_snr(d_out, grid, params)

        r_snr = _snr_reward(snr, grid, weights)
        p_n = _overshoot_penalty(photon, params.n_max, grid)
        area = np.trapezoid(np.abs(gc), grid, axis=0)
        p_area = (area / weights.a_seed - 1.0) ** 2
        if params.g_max is None:
            p_g = np.zeros_like(p_n)
        else:
            p_g = _overshoot_penalty(np.abs(gz), params.g_max, grid)
        total = (
            r_snr
            - weights.lambda_n * p_n
            - weights.lambda_area * p_area
            - weights.lambda_g * p_g
        )
        return BatchScores(
            total=total,
            r_snr=r_snr,
            p_n=p_n,
            p_area=p_area,
            p_g=p_g,
            snr_tf=snr[-1].copy(),
            peak_photon=photon.max(axis=0),
            peak_gz=np.abs(gz).max(axis=0),
        )

    def breakdown(self, coeffs: np.ndarray) -> RewardBreakdown:
        """Score a single coefficient vector."""
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 1:
            raise ValueError("breakdown expects a single coefficient vector")
        return self.scores(c[None, :]).row(0)


def total_reward(
    coeffs: np.ndarray,
    basis: SplineBasis,
    params: SystemParams,
    weights: RewardWeights,
) -> RewardBreakdown:
    """One-off scoring of a coefficient vector (builds a fresh evaluator)."""
    return RewardEvaluator(basis, params, weights).breakdown(coeffs)


def pulse_breakdown(
    pulse: SplinePulse, params: SystemParams, weights: RewardWeights
) -> RewardBreakdown:
    return total_reward(pulse.coeffs, pulse.basis, params, weights)
