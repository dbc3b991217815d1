"""Clipped-surrogate policy-gradient search over spline coefficients.

The policy is a state-independent diagonal Gaussian over the free spline
coefficients; one "episode" is a single draw of a coefficient vector,
scored by the penalized SNR reward.  Updates use the clipped surrogate

    L = E[ min( r * A, clip(r, 1 - eps, 1 + eps) * A ) ],
    r = pi_new(a) / pi_old(a),

ascended with plain gradient steps for a few epochs per sampled batch.
The gradient of the clipped objective is the unclipped policy gradient
masked to the samples where clipping is inactive (A >= 0 and r < 1 + eps,
or A < 0 and r > 1 - eps).

Internally the update works in normalized coefficient units: parameters
are divided by a fixed scale (the warm start's largest coefficient
magnitude, or a configured scale when starting from scratch) so one
learning rate serves every parameter set.  Log-probabilities are recorded
in physical units; ratios are identical in either convention.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from math import log, pi
from typing import Literal

import numpy as np

from .params import SystemParams
from .reward import BatchScores, RewardBreakdown, RewardEvaluator, RewardWeights
from .splines import N_CLAMPED, SplineBasis, SplinePulse, embed_free_coeffs

__all__ = [
    "PpoConfig",
    "PolicyState",
    "RolloutBatch",
    "UpdateInfo",
    "TrainingTrace",
    "CoefficientObjective",
    "clipped_surrogate",
    "surrogate",
    "init_policy",
    "rollout_batch",
    "ppo_update",
    "train",
    "iterations_to_target",
    "BenchmarkRow",
    "is_feasible",
]

logger = logging.getLogger(__name__)

# rewards that come back non-finite (overflowed dynamics under an extreme
# sample) are clamped to this value so the update stays defined
REWARD_FLOOR = -1.0e6


@dataclass(frozen=True)
class PpoConfig:
    """Optimizer hyperparameters.  Defaults are the values used for the
    reference comparison run."""

    batch_size: int = 64
    epochs: int = 4
    clip_eps: float = 0.2
    learning_rate: float = 3e-2
    init_std_frac: float = 0.1
    max_iterations: int = 500
    target_snr: float | None = None
    seed_mode: Literal["seeded", "unseeded"] = "seeded"
    baseline_ema: float = 0.9
    feasibility_tol: float = 0.02
    unseeded_scale: float = 5e7
    snapshot_every: int = 0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        problems = []
        if self.batch_size < 1:
            problems.append("batch_size >= 1")
        if self.epochs < 1:
            problems.append("epochs >= 1")
        if not 0 < self.clip_eps < 1:
            problems.append("0 < clip_eps < 1")
        if not self.learning_rate > 0:
            problems.append("learning_rate > 0")
        if not self.init_std_frac > 0:
            problems.append("init_std_frac > 0")
        if self.max_iterations < 1:
            problems.append("max_iterations >= 1")
        if self.target_snr is not None and not self.target_snr > 0:
            problems.append("target_snr > 0 when set")
        if self.seed_mode not in ("seeded", "unseeded"):
            problems.append("seed_mode in {'seeded', 'unseeded'}")
        if not 0 <= self.baseline_ema < 1:
            problems.append("0 <= baseline_ema < 1")
        if self.feasibility_tol < 0:
            problems.append("feasibility_tol >= 0")
        if not self.unseeded_scale > 0:
            problems.append("unseeded_scale > 0")
        if self.snapshot_every < 0:
            problems.append("snapshot_every >= 0")
        if problems:
            raise ValueError("invalid PpoConfig: " + "; ".join(problems))


class CoefficientObjective:
    """Adapter scoring free-coefficient vectors through a RewardEvaluator."""

    def __init__(self, evaluator: RewardEvaluator):
        self.evaluator = evaluator
        self.basis = evaluator.basis
        self.n_free = self.basis.n_basis - 2 * N_CLAMPED

    def _embed(self, free_rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(free_rows, dtype=float))
        full = np.zeros((rows.shape[0], self.basis.n_basis))
        full[:, N_CLAMPED : self.basis.n_basis - N_CLAMPED] = rows
        return full

    def scores(self, free_rows: np.ndarray) -> BatchScores:
        return self.evaluator.scores(self._embed(free_rows))

    def breakdown(self, free: np.ndarray) -> RewardBreakdown:
        return self.scores(np.asarray(free)[None, :]).row(0)

    def pulse(self, free: np.ndarray) -> SplinePulse:
        return embed_free_coeffs(self.basis, np.asarray(free, dtype=float))


@dataclass
class PolicyState:
    """Mutable optimizer state.  mean and log_std are in physical
    coefficient units; coeff_scale is the fixed normalization unit."""

    mean: np.ndarray
    log_std: np.ndarray
    coeff_scale: float
    rng: np.random.Generator
    baseline: float | None = None
    iteration: int = 0

    @property
    def n_params(self) -> int:
        return len(self.mean)

    @property
    def std(self) -> np.ndarray:
        return np.exp(self.log_std)


def init_policy(
    mode: str,
    config: PpoConfig,
    objective: CoefficientObjective,
    seed_pulse: SplinePulse | None = None,
    rng: np.random.Generator | None = None,
) -> PolicyState:
    """Gaussian policy centered on the warm start (seeded) or on zero.

    The initial standard deviation is init_std_frac in normalized units
    for every coordinate.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    n = objective.n_free
    if mode == "seeded":
        if seed_pulse is None:
            raise ValueError("seeded initialization requires a seed pulse")
        if seed_pulse.basis.n_basis != objective.basis.n_basis:
            raise ValueError("seed pulse basis does not match the objective basis")
        mean = seed_pulse.free_coeffs
        scale = float(np.max(np.abs(mean)))
        if not scale > 0:
            raise ValueError("seed pulse has all-zero free coefficients")
    elif mode == "unseeded":
        mean = np.zeros(n)
        scale = float(config.unseeded_scale)
    else:
        raise ValueError(f"unknown seed mode {mode!r}")
    log_std = np.full(n, log(config.init_std_frac * scale))
    return PolicyState(mean=mean, log_std=log_std, coeff_scale=scale, rng=rng)


@dataclass(frozen=True)
class RolloutBatch:
    """One sampled batch with frozen behavior-policy log-probs."""

    samples: np.ndarray      # (B, n) physical coefficient draws
    rewards: np.ndarray      # (B,) clamped totals
    log_probs: np.ndarray    # (B,) log pi_old(sample)
    scores: BatchScores
    n_clamped: int = 0


def _log_prob_rows(samples: np.ndarray, mean: np.ndarray, log_std: np.ndarray) -> np.ndarray:
    z = (samples - mean) / np.exp(log_std)
    n = samples.shape[1]
    return -0.5 * np.sum(z**2, axis=1) - np.sum(log_std) - 0.5 * n * log(2.0 * pi)


def rollout_batch(
    policy: PolicyState, config: PpoConfig, objective: CoefficientObjective
) -> RolloutBatch:
    """Sample batch_size coefficient vectors and score them.  Non-finite
    rewards are clamped to REWARD_FLOOR and counted."""
    noise = policy.rng.standard_normal((config.batch_size, policy.n_params))
    samples = policy.mean + policy.std * noise
    scores = objective.scores(samples)
    rewards = scores.total.copy()
    bad = ~np.isfinite(rewards)
    n_clamped = int(bad.sum())
    if n_clamped:
        rewards[bad] = REWARD_FLOOR
        logger.warning("clamped %d non-finite rewards to %g", n_clamped, REWARD_FLOOR)
    log_probs = _log_prob_rows(samples, policy.mean, policy.log_std)
    return RolloutBatch(
        samples=samples, rewards=rewards, log_probs=log_probs, scores=scores, n_clamped=n_clamped
    )


def clipped_surrogate(ratio: np.ndarray, advantage: np.ndarray, clip_eps: float) -> np.ndarray:
    """Per-sample clipped objective min(r A, clip(r) A)."""
    ratio = np.asarray(ratio, dtype=float)
    advantage = np.asarray(advantage, dtype=float)
    return np.minimum(
        ratio * advantage,
        np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantage,
    )


def surrogate(
    mean: np.ndarray,
    log_std: np.ndarray,
    coeff_scale: float,
    samples: np.ndarray,
    log_probs_old: np.ndarray,
    advantages: np.ndarray,
    clip_eps: float | None = None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Surrogate value and its analytic gradient.

    Returns (value, d/d mean_norm, d/d log_std) where mean_norm is
    mean / coeff_scale; pass clip_eps=None for the unclipped surrogate
    E[r A].  The clipped gradient is the unclipped one masked to samples
    where clipping is inactive.
    """
    std = np.exp(log_std)
    z = (samples - mean) / std
    log_probs_new = _log_prob_rows(samples, mean, log_std)
    ratio = np.exp(log_probs_new - log_probs_old)

    if clip_eps is None:
        per_sample = ratio * advantages
        active = np.ones_like(ratio, dtype=bool)
    else:
        per_sample = clipped_surrogate(ratio, advantages, clip_eps)
        active = np.where(
            advantages >= 0, ratio < 1.0 + clip_eps, ratio > 1.0 - clip_eps
        )

    # d log pi / d mean_norm = z / std_norm, d log pi / d log_std = z^2 - 1
    weight = np.where(active, advantages * ratio, 0.0)
    std_norm = std / coeff_scale
    grad_mean_norm = (weight[:, None] * (z / std_norm)).mean(axis=0)
    grad_log_std = (weight[:, None] * (z**2 - 1.0)).mean(axis=0)
    return float(per_sample.mean()), grad_mean_norm, grad_log_std


@dataclass(frozen=True)
class UpdateInfo:
    """Diagnostics from one ppo_update call."""

    advantages: np.ndarray         # (B,) normalized advantages
    ratios: np.ndarray             # (epochs, B) pre-step probability ratios
    surrogates: np.ndarray         # (epochs, B) pre-step clipped objectives
    skipped: bool = False


def ppo_update(
    policy: PolicyState, batch: RolloutBatch, config: PpoConfig
) -> tuple[PolicyState, UpdateInfo]:
    """One optimizer step: advantage computation plus `epochs` gradient
    ascents on the clipped surrogate over the fixed batch.

    Advantages are reward minus the running EMA baseline, normalized to
    zero mean and unit std within the batch.  A batch of two or more
    identical rewards carries no gradient signal (zero advantage spread),
    so the parameter update is skipped and logged; a single-sample batch
    uses its raw advantage unnormalized.
    """
    rewards = batch.rewards
    b = len(rewards)
    batch_mean = float(rewards.mean())
    baseline = batch_mean if policy.baseline is None else policy.baseline
    raw = rewards - baseline
    new_baseline = (
        batch_mean
        if policy.baseline is None
        else config.baseline_ema * policy.baseline + (1.0 - config.baseline_ema) * batch_mean
    )

    if b == 1:
        advantages = raw.copy()
    else:
        spread = float(raw.std())
        if spread == 0.0:
            logger.warning(
                "degenerate batch at iteration %d: zero advantage spread, update skipped",
                policy.iteration,
            )
            unchanged = PolicyState(
                mean=policy.mean.copy(),
                log_std=policy.log_std.copy(),
                coeff_scale=policy.coeff_scale,
                rng=policy.rng,
                baseline=new_baseline,
                iteration=policy.iteration,
            )
            zeros = np.zeros((config.epochs, b))
            return unchanged, UpdateInfo(
                advantages=raw.copy(), ratios=zeros, surrogates=zeros, skipped=True
            )
        advantages = (raw - raw.mean()) / spread

    mean = policy.mean.copy()
    log_std = policy.log_std.copy()
    scale = policy.coeff_scale
    ratios = np.zeros((config.epochs, b))
    surrogates = np.zeros((config.epochs, b))
    for epoch in range(config.epochs):
        std = np.exp(log_std)
        z = (batch.samples - mean) / std
        log_probs_new = _log_prob_rows(batch.samples, mean, log_std)
        ratio = np.exp(log_probs_new - batch.log_probs)
        ratios[epoch] = ratio
        surrogates[epoch] = clipped_surrogate(ratio, advantages, config.clip_eps)
        active = np.where(
            advantages >= 0, ratio < 1.0 + config.clip_eps, ratio > 1.0 - config.clip_eps
        )
        weight = np.where(active, advantages * ratio, 0.0)
        grad_mean_norm = (weight[:, None] * (z / (std / scale))).mean(axis=0)
        grad_log_std = (weight[:, None] * (z**2 - 1.0)).mean(axis=0)
        mean = mean + config.learning_rate * grad_mean_norm * scale
        log_std = log_std + config.learning_rate * grad_log_std

    updated = PolicyState(
        mean=mean,
        log_std=log_std,
        coeff_scale=scale,
        rng=policy.rng,
        baseline=new_baseline,
        iteration=policy.iteration,
    )
    return updated, UpdateInfo(advantages=advantages, ratios=ratios, surrogates=surrogates)


def is_feasible(breakdown: RewardBreakdown, params: SystemParams, tol: float) -> bool:
    """Hard-cap check used for best-pulse tracking: peak photon within
    n_max (and peak |g_z| within g_max when set), each with slack tol."""
    if breakdown.peak_photon > params.n_max * (1.0 + tol):
        return False
    if params.g_max is not None and breakdown.peak_gz > params.g_max * (1.0 + tol):
        return False
    return True


@dataclass
class TrainingTrace:
    """Per-iteration training record (arrays start at iteration 1; the
    warm-start evaluation is kept in the initial_* fields)."""

    rng_seed: int
    seed_mode: str
    initial_eval: RewardBreakdown
    iterations: np.ndarray
    mean_reward: np.ndarray
    mean_p_n: np.ndarray
    mean_p_area: np.ndarray
    mean_p_g: np.ndarray
    eval_snr: np.ndarray
    eval_reward: np.ndarray
    eval_peak_photon: np.ndarray
    best_snr: np.ndarray
    policy_std: np.ndarray
    n_clamped: np.ndarray
    skipped: np.ndarray
    snapshots: list[tuple[int, np.ndarray]] = field(default_factory=list)

    @property
    def initial_eval_snr(self) -> float:
        return self.initial_eval.snr_tf

    @property
    def n_iterations(self) -> int:
        return len(self.iterations)

    def eval_snr_from_start(self) -> np.ndarray:
        """Mean-policy SNR indexed by iteration count, entry 0 = warm start."""
        return np.concatenate([[self.initial_eval_snr], self.eval_snr])


def train(
    config: PpoConfig,
    params: SystemParams,
    weights: RewardWeights,
    basis: SplineBasis,
    seed_pulse: SplinePulse | None = None,
) -> tuple[SplinePulse, TrainingTrace]:
    """Run the full optimization loop and return the best feasible pulse.

    "Best" means the deterministic policy-mean pulse with the highest
    SNR(t_f) among iterations whose mean pulse respects the hard caps
    (within feasibility_tol).  The warm start counts as iteration 0, so
    the result is never worse than a feasible seed.  The whole run is a
    deterministic function of (config, rng_seed).
    """
    evaluator = RewardEvaluator(basis, params, weights)
    objective = CoefficientObjective(evaluator)
    rng = np.random.default_rng(config.rng_seed)
    policy = init_policy(config.seed_mode, config, objective, seed_pulse, rng=rng)

    initial_eval = objective.breakdown(policy.mean)
    best_free = policy.mean.copy()
    best_snr = -np.inf
    if is_feasible(initial_eval, params, config.feasibility_tol):
        best_snr = initial_eval.snr_tf

    snapshots: list[tuple[int, np.ndarray]] = []
    if config.snapshot_every > 0:
        snapshots.append((0, policy.mean.copy()))

    rows: list[tuple] = []
    for it in range(1, config.max_iterations + 1):
        batch = rollout_batch(policy, config, objective)
        policy, info = ppo_update(policy, batch, config)
        policy.iteration = it

        ev = objective.breakdown(policy.mean)
        if is_feasible(ev, params, config.feasibility_tol) and ev.snr_tf > best_snr:
            best_snr = ev.snr_tf
            best_free = policy.mean.copy()
        rows.append(
            (
                it,
                float(batch.rewards.mean()),
                float(batch.scores.p_n.mean()),
                float(batch.scores.p_area.mean()),
                float(batch.scores.p_g.mean()),
                ev.snr_tf,
                ev.total,
                ev.peak_photon,
                best_snr if np.isfinite(best_snr) else float("nan"),
                float(np.exp(policy.log_std).mean() / policy.coeff_scale),
                batch.n_clamped,
                info.skipped,
            )
        )
        if config.snapshot_every > 0 and it % config.snapshot_every == 0:
            snapshots.append((it, policy.mean.copy()))
        if config.target_snr is not None and ev.snr_tf >= config.target_snr:
            break

    cols = list(zip(*rows)) if rows else [[] for _ in range(12)]
    trace = TrainingTrace(
        rng_seed=config.rng_seed,
        seed_mode=config.seed_mode,
        initial_eval=initial_eval,
        iterations=np.array(cols[0], dtype=int),
        mean_reward=np.array(cols[1]),
        mean_p_n=np.array(cols[2]),
        mean_p_area=np.array(cols[3]),
        mean_p_g=np.array(cols[4]),
        eval_snr=np.array(cols[5]),
        eval_reward=np.array(cols[6]),
        eval_peak_photon=np.array(cols[7]),
        best_snr=np.array(cols[8]),
        policy_std=np.array(cols[9]),
        n_clamped=np.array(cols[10], dtype=int),
        skipped=np.array(cols[11], dtype=bool),
        snapshots=snapshots,
    )
    if not np.isfinite(best_snr):
        # no iteration satisfied the caps; fall back to the warm start
        logger.warning("no feasible pulse encountered; returning the initial mean pulse")
        best_free = (
            seed_pulse.free_coeffs if config.seed_mode == "seeded" else np.zeros(objective.n_free)
        )
    return objective.pulse(best_free), trace


@dataclass(frozen=True)
class BenchmarkRow:
    """Iterations-to-threshold statistics for one (mode, threshold) pair."""

    mode: str
    threshold: float
    mean_iterations: float   # nan when no run attained the threshold
    attained: int
    runs: int


def iterations_to_target(
    config: PpoConfig,
    params: SystemParams,
    weights: RewardWeights,
    basis: SplineBasis,
    seed_pulse: SplinePulse,
    targets: list[float],
    n_runs: int = 5,
) -> list[BenchmarkRow]:
    """Seeded-vs-unseeded benchmark: mean iterations until the mean-policy
    SNR(t_f) first reaches each threshold, over n_runs RNG seeds per mode.
    The warm start counts as iteration 0."""
    if n_runs < 1:
        raise ValueError("n_runs >= 1")
    modes = ("seeded", "unseeded")
    run_seeds = np.random.SeedSequence(config.rng_seed).generate_state(len(modes) * n_runs)
    rows: list[BenchmarkRow] = []
    for m, mode in enumerate(modes):
        hit_lists: dict[float, list[int]] = {th: [] for th in targets}
        for r in range(n_runs):
            cfg = replace(
                config,
                seed_mode=mode,
                rng_seed=int(run_seeds[m * n_runs + r]),
                target_snr=None,
                snapshot_every=0,
            )
            _, trace = train(cfg, params, weights, basis, seed_pulse if mode == "seeded" else None)
            evals = trace.eval_snr_from_start()
            for th in targets:
                idx = np.nonzero(evals >= th)[0]
                if idx.size:
                    hit_lists[th].append(int(idx[0]))
        for th in targets:
            hits = hit_lists[th]
            rows.append(
                BenchmarkRow(
                    mode=mode,
                    threshold=float(th),
                    mean_iterations=float(np.mean(hits)) if hits else float("nan"),
                    attained=len(hits),
                    runs=n_runs,
                )
            )
    return rows
