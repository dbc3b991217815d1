"""Command-line entry points.

Each subcommand loads a flat key=value config (all keys optional), writes
a run manifest into the output directory before any result, then runs the
experiment and writes its artifacts.  A finished run can be reproduced
byte for byte from its manifest alone via :func:`run_from_manifest`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .config import ConfigBundle, ConfigError, load_config, resolve_config
from .dynamics import propagate, sample_homodyne
from .io import emit_timeseries, load_manifest, load_pulse, write_manifest
from .reward import total_reward
from .seed import seed_gc
from .splines import eval_gc

__all__ = ["main", "cli_dispatch", "run_from_manifest"]

COMMANDS = (
    "calibrate-seed",
    "train",
    "evaluate",
    "sweep-scalability",
    "sweep-robustness",
    "bench-seeding",
    "histogram",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zreadout",
        description="Constrained pulse shaping for longitudinal qubit readout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, outdir: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--rng-seed", type=int, default=None, help="override rng_seed")
        if outdir:
            p.add_argument("--outdir", default=None, help="artifact directory (default runs/<command>)")
        return p

    add("calibrate-seed", "calibrate the seed amplitude and noise floor")
    p_train = add("train", "train the optimizer from the seed and compare against it")
    p_train.add_argument("--max-iterations", type=int, default=None)
    p_eval = add("evaluate", "score a stored pulse under the calibrated reward", outdir=False)
    p_eval.add_argument("--pulse", required=True, help="pulse JSON file")
    add("sweep-scalability", "seed rescaling vs optimization over (g_max, n_max) cells")
    p_rob = add("sweep-robustness", "worst-case SNR over timing/amplitude error boxes")
    p_rob.add_argument("--pulse", required=True, help="optimized pulse JSON file")
    add("bench-seeding", "iterations-to-threshold, seeded vs unseeded")
    p_hist = add("histogram", "integrated homodyne records for one pulse")
    p_hist.add_argument("--pulse", default=None, help="pulse JSON (default: calibrated seed)")
    p_hist.add_argument("--shots", type=int, default=None)
    return parser


def _apply_overrides(bundle_raw: dict, args: argparse.Namespace) -> dict:
    raw = dict(bundle_raw)
    if args.rng_seed is not None:
        raw["rng_seed"] = args.rng_seed
    if getattr(args, "max_iterations", None) is not None:
        raw["ppo.max_iterations"] = args.max_iterations
    if getattr(args, "shots", None) is not None:
        raw["histogram_shots"] = args.shots
    return raw


ARTIFACTS = {
    "calibrate-seed": ["calibration.csv"],
    "train": [
        "timeseries_seed.csv",
        "timeseries_ppo.csv",
        "trace.csv",
        "pulse_snapshots.csv",
        "histogram_seed.csv",
        "histogram_ppo.csv",
        "pulse_seed.json",
        "pulse_ppo.json",
        "summary.json",
    ],
    "sweep-scalability": ["sweep.csv"],
    "sweep-robustness": ["robustness.csv"],
    "bench-seeding": ["bench.csv"],
    "histogram": ["histogram.csv"],
}


def _execute(command: str, bundle: ConfigBundle, outdir: Path | None, cli_args: dict) -> int:
    if command == "evaluate":
        run = experiments.prepare_run(bundle)
        pulse = load_pulse(cli_args["pulse"])
        bd = total_reward(pulse.coeffs, pulse.basis, run.params, run.weights)
        for name in ("total", "r_snr", "p_n", "p_area", "p_g", "snr_tf", "peak_photon", "peak_gz"):
            print(f"{name} = {getattr(bd, name):.6g}")
        return 0

    assert outdir is not None
    write_manifest(
        outdir / "manifest.json",
        command=command,
        config_snapshot=bundle.raw,
        rng_seed=bundle.rng_seed,
        artifacts=ARTIFACTS[command],
        extra={"cli_args": cli_args},
    )

    if command == "calibrate-seed":
        run = experiments.prepare_run(bundle)
        emit_timeseries(
            outdir / "calibration.csv",
            ["n_seed", "scale_s", "gz0", "s_eff", "a_seed"],
            [(run.spec.n_seed, run.spec.scale_s, run.spec.gz0, run.params.s_eff, run.weights.a_seed)],
        )
        print(
            f"N_seed = {run.spec.n_seed:.4f}, s = {run.spec.scale_s:.6f}, "
            f"g_z0/2pi = {run.spec.gz0 / 1e6:.4f} MHz, S_eff = {run.params.s_eff:.6g}"
        )
    elif command == "train":
        result = experiments.run_comparison(bundle, outdir)
        print(
            f"seed SNR = {result.snr_seed:.4f}, optimized SNR = {result.snr_ppo:.4f} "
            f"(ratio {result.ratio:.3f}), peak photon {result.traj_ppo.peak_photon:.2f}"
        )
    elif command == "sweep-scalability":
        sweep = experiments.run_scalability(bundle, outdir)
        worst = min(c.ppo_snr - c.sta_snr for c in sweep.cells if c.scale > 0)
        print(f"{len(sweep.cells)} cells, min(ppo - sta) = {worst:.4f}")
    elif command == "sweep-robustness":
        pulse = load_pulse(cli_args["pulse"])
        surface = experiments.run_robustness(bundle, pulse, outdir)
        print(
            f"nominal sta {surface.sta[0, 0]:.4f} ppo {surface.ppo[0, 0]:.4f}; "
            f"worst corner sta {surface.sta[-1, -1]:.4f} ppo {surface.ppo[-1, -1]:.4f}"
        )
    elif command == "bench-seeding":
        rows = experiments.run_seeding_benchmark(bundle, outdir)
        for row in rows:
            print(
                f"{row.mode:>8s} threshold {row.threshold:.2f}: "
                f"mean {row.mean_iterations:.1f} iterations ({row.attained}/{row.runs} runs)"
            )
    elif command == "histogram":
        run = experiments.prepare_run(bundle)
        if cli_args.get("pulse"):
            pulse = load_pulse(cli_args["pulse"])
            gc = eval_gc(pulse, run.params.grid())
        else:
            gc = seed_gc(run.spec, run.params, run.params.grid())
        traj = propagate(gc, run.params)
        sample = sample_homodyne(
            traj,
            run.params,
            bundle.histogram_shots,
            np.random.default_rng(bundle.rng_seed),
        )
        emit_timeseries(
            outdir / "histogram.csv",
            ["record_g", "record_e"],
            list(zip(sample.record_g, sample.record_e)),
        )
        print(
            f"{sample.shots} shots, separation/sigma = {sample.snr:.4f}, "
            f"assignment error = {sample.assignment_error:.3e}"
        )
    else:
        raise ValueError(f"unknown command {command!r}")
    return 0


def cli_dispatch(argv: list[str]) -> int:
    """Parse argv (without the program name) and run one subcommand.
    Returns the process exit code: 0 success, 1 run/config error, 2 usage."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        bundle = load_config(args.config)
        raw = _apply_overrides(bundle.raw, args)
        bundle = resolve_config(raw)
        outdir = None
        if hasattr(args, "outdir"):
            outdir = Path(args.outdir) if args.outdir else Path("runs") / args.command
        cli_args = {}
        if hasattr(args, "pulse"):
            cli_args["pulse"] = args.pulse
        return _execute(args.command, bundle, outdir, cli_args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"zreadout {args.command}: {exc}", file=sys.stderr)
        return 1


def run_from_manifest(manifest_path: str | Path, outdir: str | Path) -> int:
    """Re-execute the run described by a manifest into a fresh directory.
    With unchanged code this reproduces every artifact byte for byte."""
    manifest = load_manifest(manifest_path)
    bundle = resolve_config(manifest["config"])
    return _execute(manifest["command"], bundle, Path(outdir), manifest.get("cli_args", {}))


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
