// Shared plumbing for the figure scripts: --input/--output parsing,
// manifest lookups for normalization constants, and figure writing.

import { existsSync, mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";

export interface FigureResult {
  id: string;
  svg: string;
  warnings: string[];
}

export interface RunConstants {
  omegaR: number; // rad-free cyclic rate, same convention as the CSVs
  nMax: number;
}

export const DEFAULT_CONSTANTS: RunConstants = { omegaR: 6.6e9, nMax: 50 };

// The run manifest records the config snapshot; when it sits next to the
// CSVs we take the axis-normalization constants from it instead of
// assuming the reference values.
export function runConstants(inputDir: string): RunConstants {
  const path = join(inputDir, "manifest.json");
  if (!existsSync(path)) return { ...DEFAULT_CONSTANTS };
  try {
    const manifest = JSON.parse(readFileSync(path, "utf-8"));
    const config = manifest.config ?? {};
    return {
      omegaR: Number(config["omega_r_over_2pi_hz"] ?? DEFAULT_CONSTANTS.omegaR),
      nMax: Number(config["n_max"] ?? DEFAULT_CONSTANTS.nMax),
    };
  } catch {
    return { ...DEFAULT_CONSTANTS };
  }
}

export function cliOptions(argv: string[]): { input: string; output: string } {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", short: "i" },
      output: { type: "string", short: "o" },
    },
  });
  if (!values.input || !values.output) {
    throw new Error("usage: --input <run dir> --output <figure dir>");
  }
  return { input: values.input, output: values.output };
}

export function writeFigures(outDir: string, figures: FigureResult[]): void {
  mkdirSync(outDir, { recursive: true });
  for (const fig of figures) {
    for (const w of fig.warnings) {
      console.warn(`${fig.id}: ${w}`);
    }
    writeFileSync(join(outDir, `${fig.id}.svg`), fig.svg + "\n", "utf-8");
    console.log(`wrote ${join(outDir, `${fig.id}.svg`)}`);
  }
}

// exit 1 on schema or usage errors, 0 otherwise (warnings are not fatal)
export function scriptMain(render: (input: string, output: string) => void): void {
  try {
    const { input, output } = cliOptions(process.argv.slice(2));
    render(input, output);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exitCode = 1;
  }
}
