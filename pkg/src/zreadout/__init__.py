"""Constrained pulse shaping for longitudinal qubit readout.

Analytic linearized cavity response, clamped cubic B-spline drive
waveforms, a shortcut-to-adiabaticity seed with photon-cap calibration,
and a clipped-surrogate policy-gradient optimizer warm-started from that
seed, plus the scalability / robustness / seeding experiments built on
top.
"""

__version__ = "0.1.0"

from .config import ConfigBundle, ConfigError, load_config, resolve_config
from .dynamics import (
    HomodyneSample,
    Trajectory,
    ode_oracle,
    propagate,
    sample_homodyne,
    snr_series,
)
from .experiments import (
    ComparisonResult,
    RobustnessSurface,
    SweepGrid,
    perturb_pulse,
    prepare_run,
    run_comparison,
    run_robustness,
    run_scalability,
    run_seeding_benchmark,
    worst_case_snr,
)
from .params import SystemParams, reference_params
from .ppo import (
    PolicyState,
    PpoConfig,
    TrainingTrace,
    init_policy,
    iterations_to_target,
    ppo_update,
    rollout_batch,
    train,
)
from .reward import (
    RewardBreakdown,
    RewardEvaluator,
    RewardWeights,
    penalty_area,
    penalty_coupling,
    penalty_photon,
    reward_snr,
    total_reward,
)
from .seed import SeedSpec, calibrate_s_eff, calibrate_seed, seed_coefficients, seed_gc, seed_gz
from .splines import (
    SplineBasis,
    SplinePulse,
    embed_free_coeffs,
    eval_gc,
    eval_gc_derivs,
    fit_spline_to_function,
    reconstruct_gz,
)

__all__ = [name for name in dir() if not name.startswith("_")]
