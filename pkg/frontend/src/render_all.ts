// Render every figure family from a directory of completed runs.
//
// --input points at a root that holds the run directories written by the
// command-line tool (train/, sweep-scalability/, sweep-robustness/,
// bench-seeding/, optionally under runs/), or at a single directory with
// all the CSVs side by side.  Families whose inputs are absent are
// skipped with a warning; present-but-malformed inputs are errors.

import { existsSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { FigureResult, scriptMain, writeFigures } from "./driver.js";
import { renderFig2 } from "./fig2.js";
import { renderFig3 } from "./fig3.js";
import { renderFig4 } from "./fig4.js";
import { renderFigS1 } from "./figs1.js";

interface Family {
  name: string;
  runDir: string;
  marker: string; // file that identifies a completed run of this kind
  render: (dir: string) => FigureResult[];
}

const FAMILIES: Family[] = [
  { name: "fig2a-f", runDir: "train", marker: "trace.csv", render: renderFig2 },
  { name: "fig3", runDir: "sweep-scalability", marker: "sweep.csv", render: renderFig3 },
  { name: "fig4", runDir: "sweep-robustness", marker: "robustness.csv", render: renderFig4 },
  { name: "figS1", runDir: "bench-seeding", marker: "bench.csv", render: renderFigS1 },
];

function locate(root: string, family: Family): string | null {
  for (const candidate of [join(root, family.runDir), join(root, "runs", family.runDir), root]) {
    if (existsSync(join(candidate, family.marker))) return candidate;
  }
  return null;
}

export function renderAll(root: string): { figures: FigureResult[]; skipped: string[] } {
  const figures: FigureResult[] = [];
  const skipped: string[] = [];
  for (const family of FAMILIES) {
    const dir = locate(root, family);
    if (dir === null) {
      skipped.push(family.name);
      continue;
    }
    figures.push(...family.render(dir));
  }
  return { figures, skipped };
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  scriptMain((input, output) => {
    const { figures, skipped } = renderAll(input);
    for (const name of skipped) {
      console.warn(`${name}: inputs not found under ${input}, skipped`);
    }
    if (figures.length === 0) {
      throw new Error(`no figure inputs found under ${input}`);
    }
    writeFigures(output, figures);
  });
}
