// Seeding benchmark figure: mean iterations until the policy first
// reaches each SNR threshold, warm-started vs from-scratch, as grouped
// bars.  Thresholds no run attained are marked instead of drawn.

import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { numColumn, readTable, strColumn, Table, whereEq } from "./csv.js";
import { FigureResult, scriptMain, writeFigures } from "./driver.js";
import { COLOR_PPO, COLOR_SEED, Plot } from "./svg.js";

const COLUMNS = ["mode", "threshold", "mean_iterations", "attained", "runs"];

export function figS1(bench: Table): FigureResult {
  const warnings: string[] = [];
  const modes = [
    { name: "seeded", color: COLOR_PPO, offset: -0.19 },
    { name: "unseeded", color: COLOR_SEED, offset: 0.19 },
  ];
  const thresholds = [...new Set(numColumn(bench, "threshold"))].sort((a, b) => a - b);

  const finiteMeans: number[] = [];
  const bars: { x: number; mean: number; attained: number; runs: number; color: string }[] = [];
  for (const mode of modes) {
    const rows = whereEq(bench, "mode", mode.name);
    if (rows.rows.length === 0 && bench.rows.length > 0) {
      warnings.push(`${bench.file}: no rows with mode = ${mode.name}`);
    }
    const th = numColumn(rows, "threshold");
    const mean = numColumn(rows, "mean_iterations");
    const attained = numColumn(rows, "attained");
    const runs = numColumn(rows, "runs");
    for (let i = 0; i < th.length; i++) {
      const k = thresholds.indexOf(th[i]);
      bars.push({
        x: k + mode.offset,
        mean: mean[i],
        attained: attained[i],
        runs: runs[i],
        color: mode.color,
      });
      if (!Number.isNaN(mean[i])) finiteMeans.push(mean[i]);
    }
  }

  const yMax = finiteMeans.length ? Math.max(...finiteMeans) * 1.18 : 1;
  const plot = new Plot({
    title: "iterations to reach an SNR threshold",
    xLabel: "SNR threshold",
    yLabel: "mean iterations",
    xDomain: [-0.6, Math.max(thresholds.length - 1, 0) + 0.6],
    yDomain: [0, yMax],
    xTicks: thresholds.map((_, k) => k),
    xTickLabels: thresholds.map((t) => String(t)),
  });

  if (bench.rows.length === 0) {
    warnings.push(`${bench.file} has no rows; rendering empty axes`);
    plot.note("no benchmark rows");
    return { id: "figS1", svg: plot.render(), warnings };
  }

  for (const bar of bars) {
    if (Number.isNaN(bar.mean)) {
      plot.text(bar.x, yMax * 0.04, "n/a", "#888", 9);
      continue;
    }
    plot.rect(bar.x - 0.16, bar.x + 0.16, 0, bar.mean, bar.color);
    if (bar.attained < bar.runs) {
      plot.text(bar.x, bar.mean + yMax * 0.03, `${bar.attained}/${bar.runs}`, "#555", 9);
    }
  }
  plot.legend([
    { label: "warm-started", color: COLOR_PPO },
    { label: "from scratch", color: COLOR_SEED },
  ]);
  return { id: "figS1", svg: plot.render(), warnings };
}

export function renderFigS1(inputDir: string): FigureResult[] {
  return [figS1(readTable(join(inputDir, "bench.csv"), COLUMNS))];
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  scriptMain((input, output) => writeFigures(output, renderFigS1(input)));
}
