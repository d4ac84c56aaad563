/**
 * The five figure kinds, each a pure function from parsed CSV tables to an
 * SVG string.
 */

import { column, SCHEMAS, Table } from "./csv";
import { Chart, fmt, linearScale, logScale, PALETTE } from "./svg";

export type FigureKind = "power" | "scaling" | "varS" | "dominance" | "estimator";

export interface FigureOptions {
  /** Per-input-file n values (scaling figure). */
  ns?: number[];
  /** Horizon exponent used to read the mean gap off calibration curves. */
  gamma?: number;
  title?: string;
}

function extent(values: number[], fallback: [number, number]): [number, number] {
  if (values.length === 0) return fallback;
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= Math.abs(lo) * 0.1 + 1e-12;
    hi += Math.abs(hi) * 0.1 + 1e-12;
  }
  return [lo, hi];
}

function logExtent(values: number[], fallback: [number, number]): [number, number] {
  const positive = values.filter((v) => v > 0);
  if (positive.length === 0) return fallback;
  return [Math.min(...positive), Math.max(...positive)];
}

function fitSlope(xs: number[], ys: number[]): number | null {
  if (xs.length < 2) return null;
  const lx = xs.map(Math.log);
  const ly = ys.map(Math.log);
  const mx = lx.reduce((a, b) => a + b, 0) / lx.length;
  const my = ly.reduce((a, b) => a + b, 0) / ly.length;
  let num = 0;
  let den = 0;
  for (let i = 0; i < lx.length; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) ** 2;
  }
  return den === 0 ? null : num / den;
}

export function renderPower(tables: Table[], opts: FigureOptions): string {
  const rows = tables.flatMap((t) => t.rows);
  const chart = new Chart(opts.title ?? "Detection power of the minimum-degree test",
    "gamma (changepoint at n - n^gamma)", "rejection rate");
  const area = chart.plotArea();
  const gammas = rows.map((r) => r[4]);
  const xs = linearScale(...extent(gammas, [0, 1]), area.x0, area.x1);
  const ys = linearScale(0, 1, area.y0, area.y1);
  chart.axes(xs, ys);
  const byN = new Map<number, number[][]>();
  for (const r of rows) {
    const list = byN.get(r[0]) ?? [];
    list.push(r);
    byN.set(r[0], list);
  }
  let ci = 0;
  for (const n of [...byN.keys()].sort((a, b) => a - b)) {
    const series = byN.get(n)!.sort((a, b) => a[4] - b[4]);
    const color = PALETTE[ci++ % PALETTE.length];
    chart.line(series.map((r) => [xs(r[4]), ys(r[8])]), color);
    chart.markers(series.map((r) => [xs(r[4]), ys(r[8])]), color);
    for (const r of series) chart.whisker(xs(r[4]), ys(r[9]), ys(r[10]), color);
    chart.legend(`n = ${fmt(n)}`, color);
  }
  if (rows.length > 0) {
    const alpha = rows[0][6];
    chart.line([[area.x0, ys(alpha)], [area.x1, ys(alpha)]], "#888", { dash: "4 3", width: 1 });
    chart.legend(`alpha = ${fmt(alpha)}`, "#888");
  }
  return chart.render();
}

function interpolate(xs: number[], ys: number[], x: number): number {
  if (xs.length === 1 || x <= xs[0]) return ys[0];
  for (let i = 1; i < xs.length; i++) {
    if (x <= xs[i]) {
      const f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return ys[i - 1] + f * (ys[i] - ys[i - 1]);
    }
  }
  return ys[ys.length - 1];
}

export function renderScaling(tables: Table[], opts: FigureOptions): string {
  const ns = opts.ns ?? [];
  if (tables.length > 0 && ns.length !== tables.length) {
    throw new Error(
      `scaling needs one --n per input file (${tables.length} files, ${ns.length} --n values)`,
    );
  }
  const gamma = opts.gamma ?? 0.6;
  const gaps: [number, number][] = [];
  const sds: [number, number][] = [];
  tables.forEach((t, idx) => {
    if (t.rows.length === 0) return;
    const n = ns[idx];
    const grid = column(t, "tau_over_n");
    const means = column(t, "mean");
    const sdCol = column(t, "sd");
    const atChange = interpolate(grid, means, 1 - Math.pow(n, gamma - 1));
    const atNull = means[means.length - 1];
    gaps.push([n, Math.abs(atChange - atNull)]);
    sds.push([n, sdCol[sdCol.length - 1]]);
  });
  const chart = new Chart(
    opts.title ?? `Statistic scaling in n (gap read at gamma = ${fmt(gamma)})`,
    "n", "statistic units");
  const area = chart.plotArea();
  const allX = [...gaps, ...sds].map((p) => p[0]);
  const allY = [...gaps, ...sds].map((p) => p[1]);
  const xs = logScale(...logExtent(allX, [1e3, 1e6]), area.x0, area.x1);
  const ys = logScale(...logExtent(allY, [1, 100]), area.y0, area.y1);
  chart.axes(xs, ys, { xLog: true, yLog: true });
  const series: [string, [number, number][], string][] = [
    ["mean gap", gaps, PALETTE[0]],
    ["null sd", sds, PALETTE[1]],
  ];
  for (const [label, pts, color] of series) {
    const sorted = [...pts].sort((a, b) => a[0] - b[0]);
    chart.line(sorted.map(([x, y]) => [xs(x), ys(y)]), color);
    chart.markers(sorted.map(([x, y]) => [xs(x), ys(y)]), color);
    const slope = fitSlope(sorted.map((p) => p[0]), sorted.map((p) => p[1]));
    chart.legend(slope === null ? label : `${label} (slope ${fmt(slope)})`, color);
  }
  return chart.render();
}

export function renderVarS(tables: Table[], opts: FigureOptions): string {
  const rows = tables.flatMap((t) => t.rows);
  const byN = new Map<number, number[]>();
  for (const r of rows) {
    const list = byN.get(r[1]) ?? [];
    list.push(r[3]);
    byN.set(r[1], list);
  }
  const late = [...byN.keys()].sort((a, b) => a - b);
  const means = late.map((k) => {
    const vs = byN.get(k)!;
    return vs.reduce((a, b) => a + b, 0) / vs.length;
  });
  const chart = new Chart(opts.title ?? "Variance of the likelihood-ratio core S",
    "N (suffix length)", "Var[S]");
  const area = chart.plotArea();
  const xs = logScale(...logExtent(late, [100, 10000]), area.x0, area.x1);
  const ys = logScale(...logExtent([...means, ...rows.map((r) => r[3])], [1e-5, 1e-2]),
    area.y0, area.y1);
  chart.axes(xs, ys, { xLog: true, yLog: true });
  for (const r of rows) {
    if (r[3] > 0) chart.markers([[xs(r[1]), ys(r[3])]], "#b9cfe2", 2);
  }
  chart.line(late.map((k, i) => [xs(k), ys(means[i])]), PALETTE[0]);
  chart.markers(late.map((k, i) => [xs(k), ys(means[i])]), PALETTE[0]);
  const slope = fitSlope(late, means);
  chart.legend(slope === null ? "mean Var[S]" : `mean Var[S] (slope ${fmt(slope)})`, PALETTE[0]);
  if (late.length >= 2 && means[0] > 0) {
    const ref = late.map((k) => (means[0] * late[0]) / k);
    chart.line(late.map((k, i) => [xs(k), ys(ref[i])]), "#888", { dash: "5 4", width: 1.2 });
    chart.legend("slope -1 reference", "#888");
  }
  return chart.render();
}

export function renderDominance(tables: Table[], opts: FigureOptions): string {
  const rows = tables.flatMap((t) => t.rows).sort((a, b) => a[0] - b[0]);
  const chart = new Chart(
    opts.title ?? "Late-component size vs dominating branching tree",
    "k", "P[size >= k]");
  const area = chart.plotArea();
  const ksAll = rows.map((r) => r[0]);
  const positives = rows.flatMap((r) => [r[1], r[2], r[3]]).filter((v) => v > 0);
  const xs = linearScale(...extent(ksAll, [1, 10]), area.x0, area.x1);
  const ys = logScale(...logExtent(positives, [1e-6, 2]), area.y0, area.y1);
  chart.axes(xs, ys, { yLog: true });
  const curves: [string, number, string, string | undefined][] = [
    ["component CCDF", 1, PALETTE[0], undefined],
    ["tree CCDF", 2, PALETTE[1], undefined],
    ["envelope 2e^(1-k)", 3, "#555", "6 4"],
  ];
  for (const [label, colIdx, color, dash] of curves) {
    const pts = rows.filter((r) => r[colIdx] > 0).map(
      (r) => [xs(r[0]), ys(r[colIdx])] as [number, number]);
    chart.line(pts, color, dash ? { dash } : {});
    if (!dash) chart.markers(pts, color);
    chart.legend(label, color);
  }
  return chart.render();
}

export function renderEstimator(tables: Table[], opts: FigureOptions): string {
  const rows = tables.flatMap((t) => t.rows);
  const byN = new Map<number, number[]>();
  for (const r of rows) {
    const list = byN.get(r[0]) ?? [];
    list.push(r[3] / Math.sqrt(r[0]));
    byN.set(r[0], list);
  }
  const nsSorted = [...byN.keys()].sort((a, b) => a - b);
  const medians = nsSorted.map((n) => {
    const v = [...byN.get(n)!].sort((a, b) => a - b);
    const mid = Math.floor(v.length / 2);
    return v.length % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
  });
  const chart = new Chart(opts.title ?? "Changepoint localization error",
    "n", "|tau_hat - tau| / sqrt(n)");
  const area = chart.plotArea();
  const allErr = rows.map((r) => r[3] / Math.sqrt(r[0]));
  const xs = logScale(...logExtent(nsSorted, [1e3, 1e6]), area.x0, area.x1);
  const ys = linearScale(0, extent(allErr, [0, 1])[1], area.y0, area.y1);
  chart.axes(xs, ys, { xLog: true });
  for (const r of rows) {
    chart.markers([[xs(r[0]), ys(r[3] / Math.sqrt(r[0]))]], "#b9cfe2", 2);
  }
  chart.line(nsSorted.map((n, i) => [xs(n), ys(medians[i])]), PALETTE[1]);
  chart.markers(nsSorted.map((n, i) => [xs(n), ys(medians[i])]), PALETTE[1]);
  chart.legend("median", PALETTE[1]);
  chart.legend("replicates", "#b9cfe2");
  return chart.render();
}

/** Figure kind -> (input schema, renderer). The scaling figure reads
 * calibration-schema files, one per n. */
export const KINDS: Record<
  FigureKind,
  { schema: readonly string[]; render: (tables: Table[], opts: FigureOptions) => string }
> = {
  power: { schema: SCHEMAS.power, render: renderPower },
  scaling: { schema: SCHEMAS.calibration, render: renderScaling },
  varS: { schema: SCHEMAS.varS, render: renderVarS },
  dominance: { schema: SCHEMAS.dominance, render: renderDominance },
  estimator: { schema: SCHEMAS.estimator, render: renderEstimator },
};
