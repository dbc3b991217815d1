"""Flat key=value run configuration.

The config file format is deliberately small: one ``key = value`` pair
per line, ``#`` comments, blank lines ignored.  List-valued keys take
comma-separated numbers.  Every key has a default, so an empty file is a
valid config describing the reference comparison run.  Unknown keys and
invalid values are all collected and reported together in a single
:class:`ConfigError`.

Rate-valued keys carry the ``_over_2pi_hz`` suffix; the stored internal
rates equal these values (cyclic convention, see zreadout.params).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Any

from .params import SystemParams, validate_params
from .ppo import PpoConfig
from .seed import SeedSpec

__all__ = ["ConfigError", "ConfigBundle", "load_config", "resolve_config", "DEFAULTS"]


class ConfigError(ValueError):
    """Raised with the full list of config problems joined into one message."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


def _as_float(text: str) -> float:
    return float(text)

def _as_int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)

def _as_float_list(text: str) -> list[float]:
    items = [p.strip() for p in text.split(",") if p.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(p) for p in items]

def _as_str(text: str) -> str:
    return text

def _as_optional_float(text: str) -> float | None:
    return None if text.lower() in ("none", "") else float(text)


# key -> (default value, parser)
DEFAULTS: dict[str, tuple[Any, Any]] = {
    "kappa_over_2pi_hz": (1.0e6, _as_float),
    "omega_r_over_2pi_hz": (6.6e9, _as_float),
    "omega_q_over_2pi_hz": (0.0, _as_float),
    "t_f_s": (3.0e-8, _as_float),
    "n_grid": (5001, _as_int),
    "n_max": (50.0, _as_float),
    "g_max_over_2pi_hz": (None, _as_optional_float),
    "gz0_base_over_2pi_hz": (21.0e6, _as_float),
    "n_basis": (16, _as_int),
    "eta": (1.0, _as_float),
    "s_eff": (None, _as_optional_float),
    "seed_snr_target": (3.8, _as_float),
    "w_tf": (1.0, _as_float),
    "w_avg": (0.5, _as_float),
    "lambda_n": (10.0, _as_float),
    "lambda_area": (1.0, _as_float),
    "lambda_g": (10.0, _as_float),
    "epsilon": (1e-3, _as_float),
    "rng_seed": (0, _as_int),
    "histogram_shots": (50000, _as_int),
    "ppo.batch_size": (64, _as_int),
    "ppo.epochs": (4, _as_int),
    "ppo.clip_eps": (0.2, _as_float),
    "ppo.learning_rate": (3e-2, _as_float),
    "ppo.init_std_frac": (0.1, _as_float),
    "ppo.max_iterations": (500, _as_int),
    "ppo.target_snr": (None, _as_optional_float),
    "ppo.seed_mode": ("seeded", _as_str),
    "ppo.baseline_ema": (0.9, _as_float),
    "ppo.feasibility_tol": (0.02, _as_float),
    "ppo.unseeded_scale_over_2pi_hz": (5e7, _as_float),
    "ppo.snapshot_every": (50, _as_int),
    "sweep.g_max_over_omega_r": ([0.04, 0.055, 0.07, 0.085, 0.10], _as_float_list),
    "sweep.n_max": ([30.0, 40.0, 50.0], _as_float_list),
    "sweep.max_iterations": (300, _as_int),
    "robustness.bound_t_frac": ([0.0, 0.025, 0.05, 0.075, 0.1], _as_float_list),
    "robustness.bound_a_frac": ([0.0, 0.025, 0.05, 0.075, 0.1], _as_float_list),
    "robustness.resolution": (5, _as_int),
    "bench.targets": ([3.8, 4.5, 5.0, 5.5], _as_float_list),
    "bench.runs": (5, _as_int),
    "bench.max_iterations": (300, _as_int),
}


@dataclass(frozen=True)
class ConfigBundle:
    """Resolved configuration: typed sub-objects plus the raw key map
    (the raw map is what run manifests snapshot)."""

    params: SystemParams
    seed_spec: SeedSpec
    ppo: PpoConfig
    seed_snr_target: float
    s_eff_explicit: bool
    rng_seed: int
    histogram_shots: int
    sweep_g_max_over_omega_r: list[float]
    sweep_n_max: list[float]
    sweep_max_iterations: int
    robustness_bound_t: list[float]
    robustness_bound_a: list[float]
    robustness_resolution: int
    bench_targets: list[float]
    bench_runs: int
    bench_max_iterations: int
    raw: dict[str, Any] = field(repr=False, default_factory=dict)

    def reward_kwargs(self) -> dict[str, float]:
        """Weight fields for RewardWeights (a_seed is run-dependent)."""
        raw = self.raw
        return dict(
            w_tf=raw["w_tf"],
            w_avg=raw["w_avg"],
            lambda_n=raw["lambda_n"],
            lambda_area=raw["lambda_area"],
            lambda_g=raw["lambda_g"],
            epsilon=raw["epsilon"],
        )


def _parse_lines(text: str) -> tuple[dict[str, str], list[str]]:
    pairs: dict[str, str] = {}
    problems: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, value = stripped.split("=", 1)
        key = key.strip()
        if key in pairs:
            problems.append(f"line {lineno}: duplicate key {key!r}")
            continue
        pairs[key] = value.strip()
    return pairs, problems


def resolve_config(overrides: dict[str, Any]) -> ConfigBundle:
    """Merge overrides into the defaults and build the typed bundle.

    Values in `overrides` may be already-typed (as from a manifest
    snapshot) or strings (as from a config file).
    """
    problems: list[str] = []
    values: dict[str, Any] = {key: default for key, (default, _) in DEFAULTS.items()}
    for key, value in overrides.items():
        if key not in DEFAULTS:
            problems.append(f"unknown key {key!r}")
            continue
        parser = DEFAULTS[key][1]
        if isinstance(value, str):
            try:
                values[key] = parser(value)
            except ValueError as exc:
                problems.append(f"{key}: {exc}")
        else:
            values[key] = value
    if problems:
        raise ConfigError(problems)

    param_fields = dict(
        kappa=values["kappa_over_2pi_hz"],
        omega_r=values["omega_r_over_2pi_hz"],
        omega_q=values["omega_q_over_2pi_hz"],
        t_f=values["t_f_s"],
        n_grid=values["n_grid"],
        eta=values["eta"],
        s_eff=values["s_eff"] if values["s_eff"] is not None else 1.0,
        n_max=values["n_max"],
        g_max=values["g_max_over_2pi_hz"],
    )
    param_problems = validate_params(SimpleNamespace(**param_fields))
    if param_problems:
        problems.extend(param_problems)
        params = None
    else:
        params = SystemParams(**param_fields)

    try:
        ppo_cfg = PpoConfig(
            batch_size=values["ppo.batch_size"],
            epochs=values["ppo.epochs"],
            clip_eps=values["ppo.clip_eps"],
            learning_rate=values["ppo.learning_rate"],
            init_std_frac=values["ppo.init_std_frac"],
            max_iterations=values["ppo.max_iterations"],
            target_snr=values["ppo.target_snr"],
            seed_mode=values["ppo.seed_mode"],
            baseline_ema=values["ppo.baseline_ema"],
            feasibility_tol=values["ppo.feasibility_tol"],
            unseeded_scale=values["ppo.unseeded_scale_over_2pi_hz"],
            snapshot_every=values["ppo.snapshot_every"],
            rng_seed=values["rng_seed"],
        )
    except ValueError as exc:
        problems.append(str(exc))
        ppo_cfg = None

    if not values["gz0_base_over_2pi_hz"] > 0:
        problems.append("gz0_base_over_2pi_hz > 0")
    if not values["seed_snr_target"] > 0:
        problems.append("seed_snr_target > 0")
    if values["histogram_shots"] < 1:
        problems.append("histogram_shots >= 1")
    if values["n_basis"] < 8:
        problems.append("n_basis >= 8 (three clamped coefficients per end plus free ones)")
    for key in ("sweep.max_iterations", "bench.max_iterations"):
        if values[key] < 1:
            problems.append(f"{key} >= 1")
    if values["robustness.resolution"] < 2:
        problems.append("robustness.resolution >= 2")
    if values["bench.runs"] < 1:
        problems.append("bench.runs >= 1")
    for key in ("robustness.bound_t_frac", "robustness.bound_a_frac"):
        if any(b < 0 or b >= 1 for b in values[key]):
            problems.append(f"{key}: bounds must lie in [0, 1)")
    if any(g < 0 for g in values["sweep.g_max_over_omega_r"]):
        problems.append("sweep.g_max_over_omega_r: values must be >= 0")
    if any(n <= 0 for n in values["sweep.n_max"]):
        problems.append("sweep.n_max: values must be > 0")

    if problems:
        raise ConfigError(problems)

    seed_spec = SeedSpec(gz0_base=values["gz0_base_over_2pi_hz"], n_max=values["n_max"])
    return ConfigBundle(
        params=params,
        seed_spec=seed_spec,
        ppo=ppo_cfg,
        seed_snr_target=values["seed_snr_target"],
        s_eff_explicit=values["s_eff"] is not None,
        rng_seed=values["rng_seed"],
        histogram_shots=values["histogram_shots"],
        sweep_g_max_over_omega_r=values["sweep.g_max_over_omega_r"],
        sweep_n_max=values["sweep.n_max"],
        sweep_max_iterations=values["sweep.max_iterations"],
        robustness_bound_t=values["robustness.bound_t_frac"],
        robustness_bound_a=values["robustness.bound_a_frac"],
        robustness_resolution=values["robustness.resolution"],
        bench_targets=values["bench.targets"],
        bench_runs=values["bench.runs"],
        bench_max_iterations=values["bench.max_iterations"],
        raw=values,
    )


def load_config(path: str | None) -> ConfigBundle:
    """Read a config file (None or empty file -> all defaults)."""
    if path is None:
        return resolve_config({})
    with open(path, encoding="utf-8") as handle:
        pairs, problems = _parse_lines(handle.read())
    if problems:
        raise ConfigError(problems)
    return resolve_config(pairs)
