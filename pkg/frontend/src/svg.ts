// Hand-assembled SVG output.  Everything is plain string concatenation
// over numeric inputs, so a figure is a pure function of its data: same
// CSV in, byte-identical SVG out.

export const COLOR_SEED = "#4878a8";
export const COLOR_PPO = "#c44e52";
export const COLOR_REF = "#555555";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// pixel coordinates: two decimals is below rendering resolution and
// keeps the files stable and small
export function px(value: number): string {
  const r = value.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
}

// tick labels: trim float noise, switch to exponent form off-scale
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const a = Math.abs(value);
  if (a >= 1e4 || a < 1e-3) {
    return value.toExponential(1).replace("e+", "e").replace(/e(-?)0*(\d)/, "e$1$2");
  }
  return String(parseFloat(value.toPrecision(10)));
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (x: number) => number {
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  return (x: number) => r0 + ((x - d0) / span) * (r1 - r0);
}

// classic 1-2-5 tick placement
export function ticks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export interface PlotOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
  xTicks?: number[];
  xTickLabels?: string[]; // paired with xTicks, for categorical axes
  yTicks?: number[];
}

const MARGIN = { left: 58, right: 14, top: 24, bottom: 42 };
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export interface LineStyle {
  color: string;
  width?: number;
  dash?: string;
  opacity?: number;
}

// Stateful figure builder: axes first, then geometry in data
// coordinates, then render() closes the document.
export class Plot {
  readonly sx: (x: number) => number;
  readonly sy: (y: number) => number;
  readonly opts: Required<Pick<PlotOptions, "width" | "height">> & PlotOptions;
  private parts: string[] = [];

  constructor(opts: PlotOptions) {
    const width = opts.width ?? 460;
    const height = opts.height ?? 300;
    this.opts = { ...opts, width, height };
    this.sx = linearScale(opts.xDomain[0], opts.xDomain[1], MARGIN.left, width - MARGIN.right);
    this.sy = linearScale(opts.yDomain[0], opts.yDomain[1], height - MARGIN.bottom, MARGIN.top);
    this.axes();
  }

  private axes(): void {
    const { width, height, xDomain, yDomain, title, xLabel, yLabel } = this.opts;
    const x0 = MARGIN.left;
    const x1 = width - MARGIN.right;
    const y0 = height - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.parts.push(
      `<rect x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" height="${px(y0 - y1)}" fill="none" stroke="#222" stroke-width="1"/>`,
    );
    const xt = this.opts.xTicks ?? ticks(xDomain[0], xDomain[1]);
    xt.forEach((t, i) => {
      if (t < xDomain[0] - 1e-12 || t > xDomain[1] + 1e-12) return;
      const x = this.sx(t);
      const label = this.opts.xTickLabels?.[i] ?? tickLabel(t);
      this.parts.push(
        `<line x1="${px(x)}" y1="${px(y0)}" x2="${px(x)}" y2="${px(y0 - 4)}" stroke="#222" stroke-width="1"/>`,
        `<text x="${px(x)}" y="${px(y0 + 15)}" ${FONT} font-size="10" text-anchor="middle">${esc(label)}</text>`,
      );
    });
    const yt = this.opts.yTicks ?? ticks(yDomain[0], yDomain[1]);
    for (const t of yt) {
      if (t < yDomain[0] - 1e-12 || t > yDomain[1] + 1e-12) continue;
      const y = this.sy(t);
      this.parts.push(
        `<line x1="${px(x0)}" y1="${px(y)}" x2="${px(x0 + 4)}" y2="${px(y)}" stroke="#222" stroke-width="1"/>`,
        `<text x="${px(x0 - 5)}" y="${px(y + 3)}" ${FONT} font-size="10" text-anchor="end">${esc(tickLabel(t))}</text>`,
      );
    }
    this.parts.push(
      `<text x="${px((x0 + x1) / 2)}" y="${px(height - 8)}" ${FONT} font-size="12" text-anchor="middle">${esc(xLabel)}</text>`,
      `<text x="14" y="${px((y0 + y1) / 2)}" ${FONT} font-size="12" text-anchor="middle" transform="rotate(-90 14 ${px((y0 + y1) / 2)})">${esc(yLabel)}</text>`,
    );
    if (title) {
      this.parts.push(
        `<text x="${px((x0 + x1) / 2)}" y="15" ${FONT} font-size="12" text-anchor="middle" font-weight="bold">${esc(title)}</text>`,
      );
    }
  }

  line(xs: number[], ys: number[], style: LineStyle): void {
    if (xs.length === 0) return;
    const pts = xs.map((x, i) => `${px(this.sx(x))},${px(this.sy(ys[i]))}`).join(" ");
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    const op = style.opacity !== undefined ? ` stroke-opacity="${style.opacity}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${style.color}" stroke-width="${style.width ?? 1.5}"${dash}${op}/>`,
    );
  }

  circles(xs: number[], ys: number[], color: string, r = 2.5): void {
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle cx="${px(this.sx(xs[i]))}" cy="${px(this.sy(ys[i]))}" r="${r}" fill="${color}"/>`,
      );
    }
  }

  // horizontal reference line across the full x range, with a label
  hline(y: number, color: string, label?: string): void {
    const x0 = MARGIN.left;
    const x1 = this.opts.width - MARGIN.right;
    const yy = this.sy(y);
    this.parts.push(
      `<line x1="${px(x0)}" y1="${px(yy)}" x2="${px(x1)}" y2="${px(yy)}" stroke="${color}" stroke-width="1" stroke-dasharray="5,3"/>`,
    );
    if (label) {
      this.parts.push(
        `<text x="${px(x1 - 4)}" y="${px(yy - 4)}" ${FONT} font-size="10" text-anchor="end" fill="${color}">${esc(label)}</text>`,
      );
    }
  }

  rect(x0: number, x1: number, y0: number, y1: number, fill: string): void {
    const xa = this.sx(x0);
    const xb = this.sx(x1);
    const ya = this.sy(y1);
    const yb = this.sy(y0);
    this.parts.push(
      `<rect x="${px(Math.min(xa, xb))}" y="${px(Math.min(ya, yb))}" width="${px(Math.abs(xb - xa))}" height="${px(Math.abs(yb - ya))}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, label: string, color = "#222", size = 10): void {
    this.parts.push(
      `<text x="${px(this.sx(x))}" y="${px(this.sy(y))}" ${FONT} font-size="${size}" text-anchor="middle" fill="${color}">${esc(label)}</text>`,
    );
  }

  legend(entries: { label: string; color: string; dash?: string }[]): void {
    const x = MARGIN.left + 10;
    let y = MARGIN.top + 14;
    for (const e of entries) {
      const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
      this.parts.push(
        `<line x1="${px(x)}" y1="${px(y - 3)}" x2="${px(x + 22)}" y2="${px(y - 3)}" stroke="${e.color}" stroke-width="1.5"${dash}/>`,
        `<text x="${px(x + 27)}" y="${px(y)}" ${FONT} font-size="10">${esc(e.label)}</text>`,
      );
      y += 14;
    }
  }

  note(label: string): void {
    this.parts.push(
      `<text x="${px(this.opts.width / 2)}" y="${px(this.opts.height / 2)}" ${FONT} font-size="11" text-anchor="middle" fill="#888">${esc(label)}</text>`,
    );
  }

  render(): string {
    const { width, height } = this.opts;
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
      ...this.parts,
      `</svg>`,
    ].join("\n");
  }
}

// compact perceptual colormap (viridis-like anchor stops)
const CMAP: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function colormap(t: number): string {
  const u = Math.min(1, Math.max(0, t)) * (CMAP.length - 1);
  const i = Math.min(CMAP.length - 2, Math.floor(u));
  const f = u - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const [r, g, b] = [0, 1, 2].map((k) => mix(CMAP[i][k], CMAP[i + 1][k]));
  return `rgb(${r},${g},${b})`;
}

// shade between two colors for snapshot fading (hex inputs)
export function mixHex(a: string, b: string, t: number): string {
  const pa = [1, 3, 5].map((i) => parseInt(a.slice(i, i + 2), 16));
  const pb = [1, 3, 5].map((i) => parseInt(b.slice(i, i + 2), 16));
  const c = pa.map((v, i) => Math.round(v + (pb[i] - v) * Math.min(1, Math.max(0, t))));
  return `#${c.map((v) => v.toString(16).padStart(2, "0")).join("")}`;
}

export function histogram(
  values: number[],
  lo: number,
  hi: number,
  nBins: number,
): { edges: number[]; counts: number[] } {
  const edges = Array.from({ length: nBins + 1 }, (_, i) => lo + ((hi - lo) * i) / nBins);
  const counts = new Array(nBins).fill(0);
  const span = hi - lo === 0 ? 1 : hi - lo;
  for (const v of values) {
    let k = Math.floor(((v - lo) / span) * nBins);
    if (k === nBins) k = nBins - 1; // right-closed top bin
    if (k >= 0 && k < nBins) counts[k] += 1;
  }
  return { edges, counts };
}
