/**
 * The three figure kinds over the experiment CSV contract:
 *
 *  - loglog-sweep: value vs epsilon on log-log axes, least-squares fitted
 *    line with the slope annotated;
 *  - drift:        value vs tau time series, log y-axis with a linear
 *    fallback whenever a value is non-positive (drift can be exactly 0);
 *  - overlay:      two or more series of value vs a coordinate column at a
 *    matched time (long format, grouped by a series column).
 */

import { CsvTable, CsvError, filterRows, numericColumn, RowFilter } from "./csv.js";
import { makeScale, plotArea, Scene, SERIES_COLORS } from "./svg.js";

export type FigureKind = "loglog-sweep" | "drift" | "overlay";

export interface FigureOptions {
  kind: FigureKind;
  xLabel?: string;
  yLabel?: string;
  title?: string;
  /** row filters applied before plotting, e.g. order=1 */
  where?: RowFilter[];
  /** column that separates series (drift/overlay) */
  group?: string;
  /** coordinate column for overlay (default "x") */
  xColumn?: string;
}

export function leastSquaresSlope(logx: number[], logy: number[]): {
  slope: number;
  intercept: number;
} {
  const n = logx.length;
  const mx = logx.reduce((a, b) => a + b, 0) / n;
  const my = logy.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (logx[i] - mx) * (logy[i] - my);
    den += (logx[i] - mx) ** 2;
  }
  const slope = num / den;
  return { slope, intercept: my - slope * mx };
}

function groups(table: CsvTable, column: string | undefined): Map<string, number[]> {
  const out = new Map<string, number[]>();
  if (!column) {
    out.set(
      "",
      Array.from({ length: table.rowCount }, (_, i) => i),
    );
    return out;
  }
  if (!table.header.includes(column)) {
    throw new CsvError(`unknown group column '${column}'`);
  }
  const values = table.columns.get(column)!;
  for (let i = 0; i < table.rowCount; i++) {
    const key = String(values[i]);
    if (!out.has(key)) out.set(key, []);
    out.get(key)!.push(i);
  }
  return out;
}

export function renderFigure(table: CsvTable, options: FigureOptions): string {
  const filtered = filterRows(table, options.where ?? []);
  if (filtered.rowCount === 0) {
    throw new CsvError("no rows left to plot after filtering");
  }
  switch (options.kind) {
    case "loglog-sweep":
      return renderSweep(filtered, options);
    case "drift":
      return renderDrift(filtered, options);
    case "overlay":
      return renderOverlay(filtered, options);
    default:
      throw new CsvError(`unknown figure kind '${options.kind}'`);
  }
}

function renderSweep(table: CsvTable, options: FigureOptions): string {
  const eps = numericColumn(table, "epsilon");
  const val = numericColumn(table, "value");
  if (eps.length < 2) {
    throw new CsvError("a sweep needs at least two points");
  }
  if (val.some((v) => v <= 0) || eps.some((e) => e <= 0)) {
    throw new CsvError("log-log sweep requires positive epsilon and value");
  }
  const area = plotArea();
  const xScale = makeScale(eps, area.x, true);
  const yScale = makeScale(val, area.y, true);
  const scene = new Scene();
  scene.axes(xScale, yScale, options.xLabel ?? "epsilon", options.yLabel ?? "value");

  const { slope, intercept } = leastSquaresSlope(eps.map(Math.log), val.map(Math.log));
  const sorted = [...eps].sort((a, b) => a - b);
  const linePts: [number, number][] = [sorted[0], sorted[sorted.length - 1]].map((e) => [
    xScale.toPixel(e),
    yScale.toPixel(Math.exp(intercept + slope * Math.log(e))),
  ]);
  scene.polyline(linePts, "#888", 1.2, "6 4");
  eps.forEach((e, i) => scene.circle(xScale.toPixel(e), yScale.toPixel(val[i]), 4, SERIES_COLORS[0]));
  scene.text(
    area.x[1] - 6,
    area.y[1] + 18,
    `slope ${slope.toFixed(2)}`,
    "end",
    14,
    "#444",
  );
  if (options.title) scene.text(area.x[0], 20, options.title, "start", 14);
  return scene.render();
}

function renderDrift(table: CsvTable, options: FigureOptions): string {
  const tau = numericColumn(table, "tau");
  const val = numericColumn(table, "value");
  const area = plotArea();
  const xScale = makeScale(tau, area.x, false);
  const useLog = val.every((v) => v > 0);
  const yScale = makeScale(useLog ? val : val, area.y, useLog);
  const scene = new Scene();
  scene.axes(
    xScale,
    yScale,
    options.xLabel ?? "tau",
    options.yLabel ?? (useLog ? "drift (log)" : "drift"),
  );
  const byGroup = groups(table, options.group);
  let gi = 0;
  const legendY = area.y[1] + 16;
  for (const [name, rows] of byGroup) {
    const color = SERIES_COLORS[gi % SERIES_COLORS.length];
    const pts: [number, number][] = rows
      .map((i) => [tau[i], val[i]] as [number, number])
      .sort((a, b) => a[0] - b[0])
      .map(([t, v]) => [xScale.toPixel(t), yScale.toPixel(v)]);
    scene.polyline(pts, color);
    if (name) scene.text(area.x[1] - 6, legendY + 16 * gi, name, "end", 12, color);
    gi += 1;
  }
  if (options.title) scene.text(area.x[0], 20, options.title, "start", 14);
  return scene.render();
}

function renderOverlay(table: CsvTable, options: FigureOptions): string {
  const xName = options.xColumn ?? "x";
  const coord = numericColumn(table, xName);
  const val = numericColumn(table, "value");
  const groupColumn = options.group ?? "series";
  const byGroup = groups(table, groupColumn);
  if (byGroup.size < 2) {
    throw new CsvError("an overlay needs at least two series", undefined, groupColumn);
  }
  const lengths = new Set([...byGroup.values()].map((rows) => rows.length));
  if (lengths.size !== 1) {
    throw new CsvError(
      `overlay series have mismatched lengths: ${[...byGroup.entries()]
        .map(([k, v]) => `${k}:${v.length}`)
        .join(", ")}`,
    );
  }
  const area = plotArea();
  const xScale = makeScale(coord, area.x, false);
  const yScale = makeScale(val, area.y, false);
  const scene = new Scene();
  scene.axes(xScale, yScale, options.xLabel ?? xName, options.yLabel ?? "value");
  let gi = 0;
  for (const [name, rows] of byGroup) {
    const color = SERIES_COLORS[gi % SERIES_COLORS.length];
    const pts: [number, number][] = rows
      .map((i) => [coord[i], val[i]] as [number, number])
      .sort((a, b) => a[0] - b[0])
      .map(([x, v]) => [xScale.toPixel(x), yScale.toPixel(v)]);
    scene.polyline(pts, color, gi === 0 ? 2.0 : 1.6, gi === 0 ? "" : "5 3");
    scene.text(area.x[1] - 6, area.y[1] + 16 + 16 * gi, name, "end", 12, color);
    gi += 1;
  }
  if (options.title) scene.text(area.x[0], 20, options.title, "start", 14);
  return scene.render();
}
