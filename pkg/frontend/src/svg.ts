/**
 * Minimal deterministic SVG chart builder: linear/log scales, axes with
 * tick labels, polylines, markers, and a legend. Output depends only on the
 * data handed in (fixed number formatting, no timestamps, no randomness).
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const WIDTH = 760;
export const HEIGHT = 480;
export const MARGIN: Margin = { top: 40, right: 170, bottom: 52, left: 64 };

export const PALETTE = ["#1b6ca8", "#c4442d", "#308a4e", "#7a4fa3", "#9a7b16", "#3b3b3b"];

export function fmt(x: number): string {
  if (x === 0) return "0";
  if (!Number.isFinite(x)) return "0";
  const s = x.toPrecision(6);
  return s.includes(".") || s.includes("e")
    ? s.replace(/\.?0+(e|$)/, "$1")
    : s;
}

export interface Scale {
  (value: number): number;
  ticks(): number[];
}

function niceStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (raw <= mult * mag) return mult * mag;
  }
  return 10 * mag;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const f = ((value: number) => outLo + ((value - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const step = niceStep(hi - lo);
    const first = Math.ceil(lo / step) * step;
    const out: number[] = [];
    for (let t = first; t <= hi + 1e-9 * Math.abs(step); t += step) {
      out.push(Math.abs(t) < 1e-12 ? 0 : t);
    }
    return out;
  };
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const lin = linearScale(llo, lhi === llo ? llo + 1 : lhi, outLo, outHi);
  const f = ((value: number) => lin(Math.log10(value))) as Scale;
  f.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
      out.push(Math.pow(10, e));
    }
    return out.length >= 2 ? out : [lo, hi];
  };
  return f;
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Chart {
  private parts: string[] = [];
  private legendEntries: { label: string; color: string }[] = [];

  constructor(
    public readonly title: string,
    public readonly xLabel: string,
    public readonly yLabel: string,
  ) {}

  plotArea(): { x0: number; x1: number; y0: number; y1: number } {
    return {
      x0: MARGIN.left,
      x1: WIDTH - MARGIN.right,
      y0: HEIGHT - MARGIN.bottom,
      y1: MARGIN.top,
    };
  }

  axes(xs: Scale, ys: Scale, opts: { xLog?: boolean; yLog?: boolean } = {}): void {
    const { x0, x1, y0, y1 } = this.plotArea();
    this.parts.push(
      `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#222"/>`,
    );
    for (const t of xs.ticks()) {
      const px = xs(t);
      if (px < x0 - 0.5 || px > x1 + 0.5) continue;
      this.parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="#222"/>`);
      const label = opts.xLog ? `1e${fmt(Math.log10(t))}` : fmt(t);
      this.parts.push(
        `<text x="${fmt(px)}" y="${y0 + 18}" font-size="11" text-anchor="middle">${esc(label)}</text>`,
      );
    }
    for (const t of ys.ticks()) {
      const py = ys(t);
      if (py > y0 + 0.5 || py < y1 - 0.5) continue;
      this.parts.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#222"/>`);
      const label = opts.yLog ? `1e${fmt(Math.log10(t))}` : fmt(t);
      this.parts.push(
        `<text x="${x0 - 8}" y="${fmt(py + 4)}" font-size="11" text-anchor="end">${esc(label)}</text>`,
      );
    }
  }

  line(points: [number, number][], color: string, opts: { dash?: string; width?: number } = {}): void {
    if (points.length === 0) return;
    const d = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${color}" stroke-width="${opts.width ?? 1.8}"${dash}/>`,
    );
  }

  markers(points: [number, number][], color: string, r = 3): void {
    for (const [x, y] of points) {
      this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`);
    }
  }

  whisker(x: number, yLo: number, yHi: number, color: string): void {
    this.parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(yLo)}" x2="${fmt(x)}" y2="${fmt(yHi)}" stroke="${color}" stroke-width="1"/>`,
    );
  }

  note(x: number, y: number, text: string, color = "#222"): void {
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="12" fill="${color}">${esc(text)}</text>`);
  }

  legend(label: string, color: string): void {
    this.legendEntries.push({ label, color });
  }

  render(): string {
    const { x0, x1, y0, y1 } = this.plotArea();
    const head = [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${(x0 + x1) / 2}" y="24" font-size="15" text-anchor="middle" font-weight="bold">${esc(this.title)}</text>`,
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" font-size="12" text-anchor="middle">${esc(this.xLabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(this.yLabel)}</text>`,
    ];
    const legend: string[] = [];
    this.legendEntries.forEach(({ label, color }, i) => {
      const ly = MARGIN.top + 14 + i * 18;
      legend.push(`<line x1="${x1 + 12}" y1="${ly - 4}" x2="${x1 + 34}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
      legend.push(`<text x="${x1 + 40}" y="${ly}" font-size="11">${esc(label)}</text>`);
    });
    return [...head, ...this.parts, ...legend, "</svg>", ""].join("\n");
  }
}
