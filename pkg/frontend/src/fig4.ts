// Robustness figure: worst-case SNR heatmaps over the timing/amplitude
// error box, rescaled seed beside the optimized pulse, shared color
// scale.  This one is assembled panel by panel rather than through the
// single-axes Plot helper.

import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { numColumn, readTable, Table } from "./csv.js";
import { FigureResult, scriptMain, writeFigures } from "./driver.js";
import { colormap, esc, px, tickLabel } from "./svg.js";

const COLUMNS = ["bound_t_frac", "bound_a_frac", "sta_snr", "ppo_snr"];
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

interface Surface {
  boundT: number[];
  boundA: number[];
  // value[i][j] for (boundT[i], boundA[j])
  value: number[][];
}

function toSurface(tVals: number[], aVals: number[], z: number[]): Surface {
  const boundT = [...new Set(tVals)].sort((a, b) => a - b);
  const boundA = [...new Set(aVals)].sort((a, b) => a - b);
  const value = boundT.map(() => boundA.map(() => NaN));
  for (let k = 0; k < z.length; k++) {
    const i = boundT.indexOf(tVals[k]);
    const j = boundA.indexOf(aVals[k]);
    value[i][j] = z[k];
  }
  return { boundT, boundA, value };
}

function panel(
  x0: number,
  y0: number,
  size: number,
  surface: Surface,
  vmin: number,
  vmax: number,
  title: string,
): string {
  const parts: string[] = [];
  const nT = surface.boundT.length;
  const nA = surface.boundA.length;
  const cw = size / nT;
  const ch = size / nA;
  for (let i = 0; i < nT; i++) {
    for (let j = 0; j < nA; j++) {
      const v = surface.value[i][j];
      const t = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.5;
      const fill = Number.isNaN(v) ? "#dddddd" : colormap(t);
      // row j = 0 at the bottom
      parts.push(
        `<rect x="${px(x0 + i * cw)}" y="${px(y0 + (nA - 1 - j) * ch)}" width="${px(cw)}" height="${px(ch)}" fill="${fill}"/>`,
      );
    }
  }
  parts.push(
    `<rect x="${px(x0)}" y="${px(y0)}" width="${px(size)}" height="${px(size)}" fill="none" stroke="#222" stroke-width="1"/>`,
    `<text x="${px(x0 + size / 2)}" y="${px(y0 - 7)}" ${FONT} font-size="12" text-anchor="middle" font-weight="bold">${esc(title)}</text>`,
  );
  for (let i = 0; i < nT; i++) {
    parts.push(
      `<text x="${px(x0 + (i + 0.5) * cw)}" y="${px(y0 + size + 13)}" ${FONT} font-size="9" text-anchor="middle">${esc(tickLabel(surface.boundT[i]))}</text>`,
    );
  }
  for (let j = 0; j < nA; j++) {
    parts.push(
      `<text x="${px(x0 - 4)}" y="${px(y0 + (nA - 1 - j + 0.5) * ch + 3)}" ${FONT} font-size="9" text-anchor="end">${esc(tickLabel(surface.boundA[j]))}</text>`,
    );
  }
  parts.push(
    `<text x="${px(x0 + size / 2)}" y="${px(y0 + size + 30)}" ${FONT} font-size="11" text-anchor="middle">timing bound |dt| / t_f</text>`,
  );
  return parts.join("\n");
}

export function fig4(robustness: Table): FigureResult {
  const warnings: string[] = [];
  const tVals = numColumn(robustness, "bound_t_frac");
  const aVals = numColumn(robustness, "bound_a_frac");
  const sta = numColumn(robustness, "sta_snr");
  const ppo = numColumn(robustness, "ppo_snr");

  const width = 660;
  const height = 320;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];

  if (tVals.length === 0) {
    warnings.push(`${robustness.file} has no rows; rendering empty axes`);
    parts.push(
      `<rect x="60" y="40" width="220" height="220" fill="none" stroke="#222"/>`,
      `<rect x="340" y="40" width="220" height="220" fill="none" stroke="#222"/>`,
      `<text x="${width / 2}" y="${height / 2}" ${FONT} font-size="11" text-anchor="middle" fill="#888">no robustness cells</text>`,
    );
  } else {
    const surfSta = toSurface(tVals, aVals, sta);
    const surfPpo = toSurface(tVals, aVals, ppo);
    const finite = [...sta, ...ppo].filter((v) => !Number.isNaN(v));
    const vmin = Math.min(...finite);
    const vmax = Math.max(...finite);
    parts.push(panel(60, 40, 220, surfSta, vmin, vmax, "rescaled seed"));
    parts.push(panel(340, 40, 220, surfPpo, vmin, vmax, "optimized"));
    parts.push(
      `<text x="16" y="150" ${FONT} font-size="11" text-anchor="middle" transform="rotate(-90 16 150)">amplitude bound |dA| / A</text>`,
    );
    // colorbar
    const cbX = 600;
    const cbY = 40;
    const cbH = 220;
    const steps = 32;
    for (let k = 0; k < steps; k++) {
      const t = (k + 0.5) / steps;
      parts.push(
        `<rect x="${cbX}" y="${px(cbY + cbH - ((k + 1) * cbH) / steps)}" width="16" height="${px(cbH / steps + 0.5)}" fill="${colormap(t)}"/>`,
      );
    }
    parts.push(
      `<rect x="${cbX}" y="${cbY}" width="16" height="${cbH}" fill="none" stroke="#222" stroke-width="1"/>`,
      `<text x="${cbX + 20}" y="${px(cbY + 8)}" ${FONT} font-size="9">${esc(tickLabel(vmax))}</text>`,
      `<text x="${cbX + 20}" y="${px(cbY + cbH)}" ${FONT} font-size="9">${esc(tickLabel(vmin))}</text>`,
      `<text x="${cbX + 8}" y="${px(cbY - 7)}" ${FONT} font-size="10" text-anchor="middle">SNR</text>`,
    );
  }
  parts.push("</svg>");
  return { id: "fig4", svg: parts.join("\n"), warnings };
}

export function renderFig4(inputDir: string): FigureResult[] {
  return [fig4(readTable(join(inputDir, "robustness.csv"), COLUMNS))];
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  scriptMain((input, output) => writeFigures(output, renderFig4(input)));
}
