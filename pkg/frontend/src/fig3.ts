// Scalability sweep figure: final SNR against the drive-strength cap,
// one line pair (rescaled seed vs optimized) per photon cap.

import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { numColumn, readTable, Table } from "./csv.js";
import { FigureResult, scriptMain, writeFigures } from "./driver.js";
import { COLOR_PPO, COLOR_SEED, mixHex, Plot } from "./svg.js";

const COLUMNS = ["g_max", "g_max_over_omega_r", "n_max", "sta_snr", "ppo_snr", "feasible"];

export function fig3(sweep: Table): FigureResult {
  const warnings: string[] = [];
  const gRatio = numColumn(sweep, "g_max_over_omega_r");
  const nMax = numColumn(sweep, "n_max");
  const sta = numColumn(sweep, "sta_snr");
  const ppo = numColumn(sweep, "ppo_snr");

  const nLevels = [...new Set(nMax)].sort((a, b) => a - b);
  const plot = new Plot({
    title: "final SNR across constraint cells",
    xLabel: "g_max / omega_r",
    yLabel: "SNR(t_f)",
    xDomain: gRatio.length ? [Math.min(...gRatio) * 0.95, Math.max(...gRatio) * 1.05] : [0, 1],
    yDomain: gRatio.length
      ? [0, Math.max(...sta, ...ppo) * 1.1]
      : [0, 1],
  });

  if (gRatio.length === 0) {
    warnings.push(`${sweep.file} has no rows; rendering empty axes`);
    plot.note("no sweep cells");
    return { id: "fig3", svg: plot.render(), warnings };
  }

  const legend: { label: string; color: string; dash?: string }[] = [];
  nLevels.forEach((level, k) => {
    const frac = nLevels.length > 1 ? k / (nLevels.length - 1) : 1;
    const idx = nMax
      .map((value, i) => (value === level ? i : -1))
      .filter((i) => i >= 0)
      .sort((a, b) => gRatio[a] - gRatio[b]);
    const xs = idx.map((i) => gRatio[i]);
    const staColor = mixHex("#c3d3e3", COLOR_SEED, frac);
    const ppoColor = mixHex("#ecc3c6", COLOR_PPO, frac);
    plot.line(xs, idx.map((i) => sta[i]), { color: staColor, width: 1.4, dash: "6,3" });
    plot.circles(xs, idx.map((i) => sta[i]), staColor, 2);
    plot.line(xs, idx.map((i) => ppo[i]), { color: ppoColor, width: 1.8 });
    plot.circles(xs, idx.map((i) => ppo[i]), ppoColor, 2.4);
    legend.push(
      { label: `seed, N_max = ${level}`, color: staColor, dash: "6,3" },
      { label: `optimized, N_max = ${level}`, color: ppoColor },
    );
  });
  plot.legend(legend);
  return { id: "fig3", svg: plot.render(), warnings };
}

export function renderFig3(inputDir: string): FigureResult[] {
  return [fig3(readTable(join(inputDir, "sweep.csv"), COLUMNS))];
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  scriptMain((input, output) => writeFigures(output, renderFig3(input)));
}
