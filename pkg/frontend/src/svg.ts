/**
 * Minimal deterministic SVG scene builder: fixed canvas, fixed styles, and
 * plain string assembly so that identical input bytes give identical files.
 */

export const WIDTH = 640;
export const HEIGHT = 440;
export const MARGIN = { left: 72, right: 24, top: 32, bottom: 56 };

export const SERIES_COLORS = ["#1f6fb2", "#c23b22", "#3a7d44", "#7d3a96", "#b28f1f"];

export interface Scale {
  toPixel(v: number): number;
  ticks: number[];
  label(v: number): string;
  log: boolean;
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const first = Math.ceil(lo / chosen) * chosen;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += chosen) out.push(v);
  return out;
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-12); Math.pow(10, e) <= hi * (1 + 1e-12); e++) {
    out.push(Math.pow(10, e));
  }
  if (out.length === 0) out.push(lo, hi);
  return out;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 0.01 && magnitude < 10000) {
    return String(Number(v.toPrecision(6)));
  }
  return v.toExponential(0).replace("+", "");
}

export function makeScale(
  values: number[],
  pixelRange: [number, number],
  log: boolean,
): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (log) {
    const span = hi / lo;
    lo /= Math.pow(span, 0.05) || 1;
    hi *= Math.pow(span, 0.05) || 1;
    if (lo === hi) {
      lo /= 2;
      hi *= 2;
    }
    const [p0, p1] = pixelRange;
    return {
      log,
      ticks: logTicks(lo, hi),
      label: fmtTick,
      toPixel: (v) => p0 + ((Math.log(v) - Math.log(lo)) / (Math.log(hi) - Math.log(lo))) * (p1 - p0),
    };
  }
  const pad = (hi - lo || Math.abs(hi) || 1) * 0.05;
  lo -= pad;
  hi += pad;
  const [p0, p1] = pixelRange;
  return {
    log,
    ticks: niceTicks(lo, hi),
    label: fmtTick,
    toPixel: (v) => p0 + ((v - lo) / (hi - lo)) * (p1 - p0),
  };
}

function px(v: number): string {
  // fixed-precision pixel coordinates keep output byte-stable
  return v.toFixed(2);
}

export class Scene {
  private parts: string[] = [];

  add(fragment: string) {
    this.parts.push(fragment);
  }

  polyline(points: [number, number][], color: string, width = 1.6, dash = "") {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    const d = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
    this.parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="${width}"${attr} points="${d}"/>`,
    );
  }

  circle(x: number, y: number, r: number, color: string) {
    this.parts.push(`<circle cx="${px(x)}" cy="${px(y)}" r="${r}" fill="${color}"/>`);
  }

  text(x: number, y: number, content: string, anchor = "start", size = 13, color = "#222") {
    this.parts.push(
      `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
        `font-family="Helvetica, Arial, sans-serif" font-size="${size}" fill="${color}">` +
        `${escapeXml(content)}</text>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, color = "#999", width = 1) {
    this.parts.push(
      `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ` +
        `stroke="${color}" stroke-width="${width}"/>`,
    );
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string) {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0, "#333", 1.2);
    this.line(x0, y0, x0, y1, "#333", 1.2);
    for (const t of xScale.ticks) {
      const xp = xScale.toPixel(t);
      if (xp < x0 - 0.5 || xp > x1 + 0.5) continue;
      this.line(xp, y0, xp, y0 + 5, "#333");
      this.text(xp, y0 + 20, xScale.label(t), "middle", 12);
    }
    for (const t of yScale.ticks) {
      const yp = yScale.toPixel(t);
      if (yp > y0 + 0.5 || yp < y1 - 0.5) continue;
      this.line(x0 - 5, yp, x0, yp, "#333");
      this.text(x0 - 8, yp + 4, yScale.label(t), "end", 12);
    }
    this.text((x0 + x1) / 2, HEIGHT - 14, xLabel, "middle");
    this.add(
      `<text x="18" y="${px((y0 + y1) / 2)}" text-anchor="middle" ` +
        `font-family="Helvetica, Arial, sans-serif" font-size="13" fill="#222" ` +
        `transform="rotate(-90 18 ${px((y0 + y1) / 2)})">${escapeXml(yLabel)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function plotArea(): { x: [number, number]; y: [number, number] } {
  return {
    x: [MARGIN.left, WIDTH - MARGIN.right],
    y: [HEIGHT - MARGIN.bottom, MARGIN.top],
  };
}
