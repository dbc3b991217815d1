// Comparison-run figure family: training curve, pulse snapshots, drive
// waveforms, photon number with the cap marked, cumulative SNR, and the
// homodyne histograms.  Inputs are the artifacts of one `train` run.

import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { numColumn, readTable, strColumn, Table } from "./csv.js";
import {
  FigureResult,
  RunConstants,
  runConstants,
  scriptMain,
  writeFigures,
} from "./driver.js";
import {
  COLOR_PPO,
  COLOR_REF,
  COLOR_SEED,
  histogram,
  mixHex,
  Plot,
} from "./svg.js";

function padded(values: number[], frac = 0.06): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi > lo)) return [lo - 1, hi + 1];
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}

export function fig2a(trace: Table): FigureResult {
  const it = numColumn(trace, "iteration");
  const evalSnr = numColumn(trace, "eval_snr");
  const bestSnr = numColumn(trace, "best_snr");
  const plot = new Plot({
    title: "training progress",
    xLabel: "iteration",
    yLabel: "SNR(t_f)",
    xDomain: [0, it.length ? it[it.length - 1] : 1],
    yDomain: padded([...evalSnr, ...bestSnr]),
  });
  const warnings: string[] = [];
  if (it.length === 0) {
    warnings.push(`${trace.file} has no rows; empty axes`);
    plot.note("no training iterations recorded");
  } else {
    plot.line(it, evalSnr, { color: COLOR_SEED, width: 1, opacity: 0.8 });
    plot.line(it, bestSnr, { color: COLOR_PPO, width: 2 });
    plot.legend([
      { label: "policy-mean SNR", color: COLOR_SEED },
      { label: "best feasible SNR", color: COLOR_PPO },
    ]);
  }
  return { id: "fig2a", svg: plot.render(), warnings };
}

export function fig2b(snapshots: Table, constants: RunConstants): FigureResult {
  const labels = strColumn(snapshots, "iteration");
  const t = numColumn(snapshots, "t");
  const gc = numColumn(snapshots, "gc");
  const tF = t.length ? Math.max(...t) : 1;

  // group rows by snapshot label, preserving file order
  const groups: { label: string; t: number[]; gc: number[] }[] = [];
  let current: { label: string; t: number[]; gc: number[] } | null = null;
  for (let i = 0; i < labels.length; i++) {
    if (!current || current.label !== labels[i]) {
      current = { label: labels[i], t: [], gc: [] };
      groups.push(current);
    }
    current.t.push(t[i] / tF);
    current.gc.push(gc[i] / constants.omegaR);
  }

  const plot = new Plot({
    title: "pulse shape over training",
    xLabel: "t / t_f",
    yLabel: "g_c / omega_r",
    xDomain: [0, 1],
    yDomain: padded(gc.map((v) => v / constants.omegaR)),
  });
  const warnings: string[] = [];
  if (groups.length === 0) {
    warnings.push(`${snapshots.file} has no rows; empty axes`);
    plot.note("no pulse snapshots recorded");
  } else {
    groups.forEach((g, k) => {
      const frac = groups.length > 1 ? k / (groups.length - 1) : 1;
      plot.line(g.t, g.gc, { color: mixHex("#b8c6d8", COLOR_PPO, frac), width: 1.3 });
    });
    plot.legend([
      { label: `iteration ${groups[0].label}`, color: "#b8c6d8" },
      { label: `iteration ${groups[groups.length - 1].label}`, color: COLOR_PPO },
    ]);
  }
  return { id: "fig2b", svg: plot.render(), warnings };
}

function overlay(
  id: string,
  seed: Table,
  ppo: Table,
  column: "gz" | "photon" | "snr",
  opts: { title: string; yLabel: string; scale: number },
  decorate?: (plot: Plot) => void,
): FigureResult {
  const tSeed = numColumn(seed, "t");
  const tF = tSeed.length ? Math.max(...tSeed) : 1;
  const ySeed = numColumn(seed, column).map((v) => v * opts.scale);
  const yPpo = numColumn(ppo, column).map((v) => v * opts.scale);
  const xSeed = tSeed.map((v) => v / tF);
  const xPpo = numColumn(ppo, "t").map((v) => v / tF);

  const plot = new Plot({
    title: opts.title,
    xLabel: "t / t_f",
    yLabel: opts.yLabel,
    xDomain: [0, 1],
    yDomain: padded([...ySeed, ...yPpo, 0]),
  });
  const warnings: string[] = [];
  if (tSeed.length === 0) {
    warnings.push(`${seed.file} has no rows; empty axes`);
    plot.note("no samples");
  } else {
    if (decorate) decorate(plot);
    plot.line(xSeed, ySeed, { color: COLOR_SEED, width: 1.5, dash: "6,3" });
    plot.line(xPpo, yPpo, { color: COLOR_PPO, width: 1.8 });
    plot.legend([
      { label: "rescaled seed", color: COLOR_SEED, dash: "6,3" },
      { label: "optimized", color: COLOR_PPO },
    ]);
  }
  return { id, svg: plot.render(), warnings };
}

export function fig2c(seed: Table, ppo: Table, constants: RunConstants): FigureResult {
  return overlay("fig2c", seed, ppo, "gz", {
    title: "physical drive",
    yLabel: "g_z / omega_r",
    scale: 1 / constants.omegaR,
  });
}

export function fig2d(seed: Table, ppo: Table, constants: RunConstants): FigureResult {
  const result = overlay(
    "fig2d",
    seed,
    ppo,
    "photon",
    { title: "intracavity photon number", yLabel: "N(t)", scale: 1 },
    (plot) => plot.hline(constants.nMax, COLOR_REF, `N_max = ${constants.nMax}`),
  );
  return result;
}

export function fig2e(seed: Table, ppo: Table): FigureResult {
  return overlay("fig2e", seed, ppo, "snr", {
    title: "cumulative SNR",
    yLabel: "SNR(t)",
    scale: 1,
  });
}

export function fig2f(histSeed: Table, histPpo: Table): FigureResult {
  const records = {
    seedG: numColumn(histSeed, "record_g"),
    seedE: numColumn(histSeed, "record_e"),
    ppoG: numColumn(histPpo, "record_g"),
    ppoE: numColumn(histPpo, "record_e"),
  };
  const all = [...records.seedG, ...records.seedE, ...records.ppoG, ...records.ppoE];
  const warnings: string[] = [];
  const [lo, hi] = padded(all, 0.02);
  const nBins = 48;

  const curves = [
    { values: records.seedG, color: COLOR_SEED, dash: "5,3" },
    { values: records.seedE, color: COLOR_SEED, dash: undefined },
    { values: records.ppoG, color: COLOR_PPO, dash: "5,3" },
    { values: records.ppoE, color: COLOR_PPO, dash: undefined },
  ].map((c) => ({ ...c, hist: histogram(c.values, lo, hi, nBins) }));

  const peak = Math.max(1, ...curves.map((c) => Math.max(...c.hist.counts)));
  const plot = new Plot({
    title: "integrated homodyne records",
    xLabel: "integrated record",
    yLabel: "counts",
    xDomain: [lo, hi],
    yDomain: [0, peak * 1.08],
  });
  if (all.length === 0) {
    warnings.push(`${histSeed.file} has no rows; empty axes`);
    plot.note("no homodyne records");
  } else {
    for (const c of curves) {
      // step outline of the histogram
      const xs: number[] = [];
      const ys: number[] = [];
      for (let k = 0; k < nBins; k++) {
        xs.push(c.hist.edges[k], c.hist.edges[k + 1]);
        ys.push(c.hist.counts[k], c.hist.counts[k]);
      }
      plot.line(xs, ys, { color: c.color, width: 1.3, dash: c.dash });
    }
    plot.legend([
      { label: "seed, qubit g", color: COLOR_SEED, dash: "5,3" },
      { label: "seed, qubit e", color: COLOR_SEED },
      { label: "optimized, qubit g", color: COLOR_PPO, dash: "5,3" },
      { label: "optimized, qubit e", color: COLOR_PPO },
    ]);
  }
  return { id: "fig2f", svg: plot.render(), warnings };
}

const TIMESERIES = ["t", "gc", "gz", "photon", "snr"];

export function renderFig2(inputDir: string): FigureResult[] {
  const constants = runConstants(inputDir);
  const trace = readTable(join(inputDir, "trace.csv"), [
    "iteration",
    "eval_snr",
    "best_snr",
  ]);
  const snapshots = readTable(join(inputDir, "pulse_snapshots.csv"), [
    "iteration",
    "t",
    "gc",
  ]);
  const seed = readTable(join(inputDir, "timeseries_seed.csv"), TIMESERIES);
  const ppo = readTable(join(inputDir, "timeseries_ppo.csv"), TIMESERIES);
  const histSeed = readTable(join(inputDir, "histogram_seed.csv"), ["record_g", "record_e"]);
  const histPpo = readTable(join(inputDir, "histogram_ppo.csv"), ["record_g", "record_e"]);
  return [
    fig2a(trace),
    fig2b(snapshots, constants),
    fig2c(seed, ppo, constants),
    fig2d(seed, ppo, constants),
    fig2e(seed, ppo),
    fig2f(histSeed, histPpo),
  ];
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  scriptMain((input, output) => writeFigures(output, renderFig2(input)));
}
