/**
 * Pure SVG generation for the CEP view: scatter cloud, fitted line, origin
 * crosshair, dashed marginal-effect lines. No DOM dependency, so the whole
 * rendering path is unit-testable as strings.
 */

import type { CepPoint, CepSummary } from "./types.js";

export interface Scale {
  domain: [number, number];
  range: [number, number];
}

export function makeScale(values: number[], range: [number, number], padFrac = 0.06): Scale {
  let lo = Math.min(0, ...values);
  let hi = Math.max(0, ...values);
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * padFrac;
  return { domain: [lo - pad, hi + pad], range };
}

export function apply(scale: Scale, x: number): number {
  const [d0, d1] = scale.domain;
  const [r0, r1] = scale.range;
  return r0 + ((x - d0) / (d1 - d0)) * (r1 - r0);
}

const fmt = (x: number) => (Math.round(x * 100) / 100).toString();

export function renderCepSvg(
  points: CepPoint[],
  summary: CepSummary,
  width = 560,
  height = 420,
): string {
  const m = { left: 52, right: 14, top: 12, bottom: 40 };
  const xs = makeScale(points.map((p) => p.ds).concat([summary.mean_ds]), [m.left, width - m.right]);
  const ys = makeScale(points.map((p) => p.dt).concat([summary.mean_dt]), [height - m.bottom, m.top]);

  const dots = points
    .map((p) => `<circle cx="${fmt(apply(xs, p.ds))}" cy="${fmt(apply(ys, p.dt))}" r="1.6" class="pt"/>`)
    .join("");

  const [x0, x1] = xs.domain;
  const lineY = (x: number) => summary.g0_mean + summary.g1_mean * x;
  const fitted =
    `<line x1="${fmt(apply(xs, x0))}" y1="${fmt(apply(ys, lineY(x0)))}" ` +
    `x2="${fmt(apply(xs, x1))}" y2="${fmt(apply(ys, lineY(x1)))}" class="fit"/>`;

  const crosshair =
    `<line x1="${fmt(apply(xs, 0))}" y1="${fmt(ys.range[0])}" x2="${fmt(apply(xs, 0))}" y2="${fmt(ys.range[1])}" class="axis"/>` +
    `<line x1="${fmt(xs.range[0])}" y1="${fmt(apply(ys, 0))}" x2="${fmt(xs.range[1])}" y2="${fmt(apply(ys, 0))}" class="axis"/>`;

  const marginals =
    `<line x1="${fmt(apply(xs, summary.mean_ds))}" y1="${fmt(ys.range[0])}" ` +
    `x2="${fmt(apply(xs, summary.mean_ds))}" y2="${fmt(ys.range[1])}" class="marginal"/>` +
    `<line x1="${fmt(xs.range[0])}" y1="${fmt(apply(ys, summary.mean_dt))}" ` +
    `x2="${fmt(xs.range[1])}" y2="${fmt(apply(ys, summary.mean_dt))}" class="marginal"/>`;

  const labels =
    `<text x="${(m.left + width - m.right) / 2}" y="${height - 8}" class="lbl">` +
    `effect on intermediate endpoint</text>` +
    `<text x="14" y="${(m.top + height - m.bottom) / 2}" class="lbl" ` +
    `transform="rotate(-90 14 ${(m.top + height - m.bottom) / 2})">effect on survival</text>`;

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">` +
    `<style>.pt{fill:#1f4e79;opacity:.4}.fit{stroke:#111;stroke-width:1.6}` +
    `.axis{stroke:#999;stroke-width:.7}.marginal{stroke:#c22;stroke-width:1;` +
    `stroke-dasharray:5 4}.lbl{font:11px sans-serif;fill:#333;text-anchor:middle}</style>` +
    crosshair + dots + fitted + marginals + labels +
    `</svg>`
  );
}
