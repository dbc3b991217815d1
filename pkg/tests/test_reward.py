"""Reward and penalty tests, including an independent re-derivation of the
full objective that shares no code with the package implementation."""

import numpy as np
import pytest

from zreadout.dynamics import Trajectory, propagate
from zreadout.params import reference_params
from zreadout.reward import (
    RewardEvaluator,
    RewardWeights,
    penalty_area,
    penalty_coupling,
    penalty_photon,
    reward_snr,
    total_reward,
)
from zreadout.splines import SplineBasis, embed_free_coeffs


@pytest.fixture(scope="module")
def params():
    return reference_params(s_eff=1.0e5, g_max=5.0e8)


@pytest.fixture(scope="module")
def basis(params):
    return SplineBasis.uniform(16, params.t_f)


@pytest.fixture(scope="module")
def weights():
    return RewardWeights(a_seed=7.0, w_tf=1.0, w_avg=0.5, lambda_n=10.0, lambda_area=1.0, lambda_g=10.0, epsilon=1e-3)


def random_coeffs(rng, scale=4e8):
    coeffs = np.zeros(16)
    coeffs[3:-3] = rng.normal(size=10) * scale
    return coeffs


def independent_total(coeffs, basis, params, weights):
    """Reward recomputed from scratch: own quadrature, own response."""
    t = params.grid()
    dt = t[1] - t[0]
    gc = basis.matrix(t) @ coeffs
    gz = gc + (basis.matrix(t, deriv=2) @ coeffs) / params.omega_r**2

    def cumtrap(y):
        out = np.zeros_like(y)
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * dt)
        return out

    def trap(y):
        return float(np.sum(0.5 * (y[1:] + y[:-1]) * dt))

    x = np.exp(-0.5 * params.kappa * t) * cumtrap(gc * np.exp(0.5 * params.kappa * t))
    photon = x**2
    d_out = 2.0 * np.sqrt(params.kappa) * np.abs(x)
    snr = np.zeros_like(t)
    snr[1:] = np.sqrt(params.eta * params.kappa) * cumtrap(d_out)[1:] / np.sqrt(
        params.s_eff * t[1:]
    )
    r_snr = weights.w_tf * np.log(snr[-1] + weights.epsilon) + weights.w_avg * np.log(
        trap(snr + weights.epsilon) / params.t_f
    )
    p_n = trap(np.maximum(0.0, photon / params.n_max - 1.0) ** 2) / params.t_f
    p_area = (trap(np.abs(gc)) / weights.a_seed - 1.0) ** 2
    p_g = trap(np.maximum(0.0, np.abs(gz) / params.g_max - 1.0) ** 2) / params.t_f
    return (
        r_snr
        - weights.lambda_n * p_n
        - weights.lambda_area * p_area
        - weights.lambda_g * p_g
    )


def test_total_matches_independent_recomputation(params, basis, weights):
    rng = np.random.default_rng(1)
    for _ in range(5):
        coeffs = random_coeffs(rng)
        got = total_reward(coeffs, basis, params, weights)
        expected = independent_total(coeffs, basis, params, weights)
        assert got.total == pytest.approx(expected, rel=1e-9)


def test_breakdown_identity_is_exact(params, basis, weights):
    rng = np.random.default_rng(2)
    bd = total_reward(random_coeffs(rng), basis, params, weights)
    reassembled = (
        bd.r_snr
        - weights.lambda_n * bd.p_n
        - weights.lambda_area * bd.p_area
        - weights.lambda_g * bd.p_g
    )
    assert bd.total == reassembled


def test_zero_pulse_closed_form(params, basis, weights):
    bd = total_reward(np.zeros(16), basis, params, weights)
    assert bd.p_n == 0.0
    assert bd.p_g == 0.0
    assert bd.p_area == 1.0
    expected = (weights.w_tf + weights.w_avg) * np.log(weights.epsilon) - weights.lambda_area
    assert bd.total == pytest.approx(expected, rel=1e-12)
    assert bd.snr_tf == 0.0


def synthetic_trajectory(params, photon):
    t = params.grid()
    zeros = np.zeros_like(t)
    return Trajectory(grid=t, alpha_e=zeros * 1j, photon=photon, d_out=zeros, snr=zeros)


def test_photon_penalty_closed_form(params):
    # N(t) = n_max (1 + t/t_f) gives (1/t_f) integral (t/t_f)^2 dt = 1/3
    t = params.grid()
    traj = synthetic_trajectory(params, params.n_max * (1.0 + t / params.t_f))
    assert penalty_photon(traj, params) == pytest.approx(1.0 / 3.0, rel=1e-6)


def test_photon_penalty_zero_below_cap(params):
    t = params.grid()
    traj = synthetic_trajectory(params, params.n_max * np.sin(np.pi * t / params.t_f) ** 2)
    assert penalty_photon(traj, params) == 0.0


def test_area_penalty_values(params, weights):
    t = params.grid()
    flat = np.full_like(t, weights.a_seed / params.t_f)
    assert penalty_area(flat, weights, t) == pytest.approx(0.0, abs=1e-12)
    assert penalty_area(2.0 * flat, weights, t) == pytest.approx(1.0, rel=1e-9)
    # sign-insensitive: a negative-going pulse has the same area
    assert penalty_area(-flat, weights, t) == pytest.approx(0.0, abs=1e-12)


def test_coupling_penalty(params):
    t = params.grid()
    gz = params.g_max * (1.0 + t / params.t_f)
    assert penalty_coupling(gz, params, t) == pytest.approx(1.0 / 3.0, rel=1e-6)
    no_cap = reference_params(s_eff=1.0, g_max=None)
    assert penalty_coupling(gz, no_cap, no_cap.grid()) == 0.0


def test_reward_snr_decreases_with_noise(params, basis, weights):
    rng = np.random.default_rng(3)
    coeffs = random_coeffs(rng)
    gc = basis.matrix(params.grid()) @ coeffs
    quiet = propagate(gc, params)
    noisy_params = reference_params(s_eff=4.0 * params.s_eff, g_max=params.g_max)
    noisy = propagate(gc, noisy_params)
    assert reward_snr(noisy, weights, noisy_params) < reward_snr(quiet, weights, params)


def test_overdriving_raises_photon_penalty_and_lowers_total(params, basis, weights, prepared):
    # scale the seed fit past the cap: p_n turns on and the total drops
    seed_coeffs = np.array(prepared.seed_fit.pulse.coeffs)
    w = RewardWeights(a_seed=prepared.weights.a_seed)
    p = reference_params(s_eff=prepared.params.s_eff)
    base = total_reward(seed_coeffs, basis, p, w)
    hot = total_reward(1.3 * seed_coeffs, basis, p, w)
    assert base.p_n == 0.0
    assert hot.p_n > 0.0
    assert hot.peak_photon > base.peak_photon
    assert hot.total < base.total


def test_evaluator_batch_matches_single(params, basis, weights):
    rng = np.random.default_rng(4)
    ev = RewardEvaluator(basis, params, weights)
    rows = np.stack([random_coeffs(rng) for _ in range(6)])
    scores = ev.scores(rows)
    for i in range(6):
        bd = ev.breakdown(rows[i])
        assert scores.total[i] == pytest.approx(bd.total, rel=1e-12)
        assert scores.snr_tf[i] == pytest.approx(bd.snr_tf, rel=1e-12)
        assert scores.peak_photon[i] == pytest.approx(bd.peak_photon, rel=1e-12)


def test_evaluator_is_deterministic(params, basis, weights):
    rng = np.random.default_rng(5)
    coeffs = random_coeffs(rng)
    ev = RewardEvaluator(basis, params, weights)
    a = ev.breakdown(coeffs)
    b = ev.breakdown(coeffs)
    assert a == b


def test_weight_validation():
    with pytest.raises(ValueError, match="a_seed"):
        RewardWeights(a_seed=0.0)
    with pytest.raises(ValueError, match="epsilon"):
        RewardWeights(a_seed=1.0, epsilon=0.0)
    with pytest.raises(ValueError, match="lambda_n"):
        RewardWeights(a_seed=1.0, lambda_n=-1.0)


def test_basis_params_tf_mismatch(params, weights):
    other = SplineBasis.uniform(16, 2.0 * params.t_f)
    with pytest.raises(ValueError, match="t_f"):
        RewardEvaluator(other, params, weights)
