/** The four figure kinds, each a pure function CSV text -> SVG text. */

import { parseCsv, Row, SCHEMAS, PlotKind } from "./csv.js";
import { makeScale } from "./scale.js";
import { plotArea, SvgBuilder, SERIES_COLORS } from "./svg.js";

function groupBy(rows: Row[], key: string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const k = String(row[key]);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}

const num = (row: Row, key: string) => Number(row[key]);

/** distances.csv: sup-in-time distance vs eps, log-log, one line per gamma. */
export function renderConvergence(csvText: string): string {
  const rows = parseCsv(csvText, [...SCHEMAS.convergence]);
  const area = plotArea();
  const xs = rows.map((r) => num(r, "eps"));
  const ys = rows.map((r) => num(r, "sup_dist"));
  const xScale = makeScale(xs, area.x, true);
  const yScale = makeScale(ys, area.y, true);

  const svg = new SvgBuilder();
  svg.title("Convergence of the mollified family");
  svg.axes(xScale, yScale, "mollification scale eps", "sup-in-time distance");
  const legend: Array<{ label: string; color: string }> = [];
  let i = 0;
  for (const [gamma, group] of groupBy(rows, "gamma")) {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const sorted = [...group].sort((a, b) => num(a, "eps") - num(b, "eps"));
    const pts = sorted.map(
      (r): [number, number] => [xScale(num(r, "eps")), yScale(num(r, "sup_dist"))],
    );
    if (pts.length > 1) svg.polyline(pts, color);
    for (const [px, py] of pts) svg.circle(px, py, 3, color);
    const kappa = num(sorted[0], "kappa_hat");
    const suffix = Number.isFinite(kappa) ? ` (rate ${kappa.toFixed(2)})` : "";
    legend.push({ label: `gamma=${gamma}${suffix}`, color });
    i += 1;
  }
  svg.legend(legend);
  return svg.render();
}

/** energy.csv: relative drift of the conserved quantities over time. */
export function renderDrift(csvText: string): string {
  const rows = parseCsv(csvText, [...SCHEMAS.drift]);
  const area = plotArea();
  const series = ["mass", "hamiltonian", "E"] as const;
  const ts = rows.map((r) => num(r, "t"));

  const drifts = series.map((name) => {
    const ref = num(rows[0], name);
    const denom = Math.max(Math.abs(ref), 1e-300);
    return rows.map((r) => Math.abs(num(r, name) - ref) / denom);
  });
  // zero drift (exact conservation, or the t=0 row) clips to the floor
  const floor = 1e-17;
  const all = drifts.flat().map((d) => Math.max(d, floor));
  const xScale = makeScale(ts, area.x, false);
  const yScale = makeScale(all, area.y, true);

  const svg = new SvgBuilder();
  svg.title("Relative drift of conserved quantities");
  svg.axes(xScale, yScale, "time t", "relative drift");
  const legend: Array<{ label: string; color: string }> = [];
  series.forEach((name, i) => {
    const color = SERIES_COLORS[i];
    const pts = rows.map(
      (r, k): [number, number] => [xScale(num(r, "t")), yScale(Math.max(drifts[i][k], floor))],
    );
    if (pts.length > 1) svg.polyline(pts, color);
    for (const [px, py] of pts) svg.circle(px, py, 2, color);
    legend.push({ label: name, color });
  });
  svg.legend(legend);
  return svg.render();
}

/** stats.csv: median noise norms vs eps with decile whiskers, per norm. */
export function renderNoiseFit(csvText: string): string {
  const rows = parseCsv(csvText, [...SCHEMAS.noise_fit]);
  const area = plotArea();
  const xScale = makeScale(rows.map((r) => num(r, "eps")), area.x, true);
  const spread = rows.flatMap((r) => [num(r, "p10"), num(r, "p90"), num(r, "median")]);
  const yScale = makeScale(spread, area.y, true);

  const svg = new SvgBuilder();
  svg.title("Noise-field norms vs mollification scale");
  svg.axes(xScale, yScale, "mollification scale eps", "norm (median, p10-p90)");
  const legend: Array<{ label: string; color: string }> = [];
  let i = 0;
  for (const [name, group] of groupBy(rows, "norm_name")) {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const sorted = [...group].sort((a, b) => num(a, "eps") - num(b, "eps"));
    const pts = sorted.map(
      (r): [number, number] => [xScale(num(r, "eps")), yScale(num(r, "median"))],
    );
    if (pts.length > 1) svg.polyline(pts, color);
    for (const r of sorted) {
      const px = xScale(num(r, "eps"));
      svg.line(px, yScale(num(r, "p10")), px, yScale(num(r, "p90")), color, 1);
      svg.circle(px, yScale(num(r, "median")), 3, color);
    }
    const slope = num(sorted[0], "fit_slope");
    const suffix = Number.isFinite(slope) ? ` (slope ${slope.toFixed(2)})` : "";
    legend.push({ label: `${name}${suffix}`, color });
    i += 1;
  }
  svg.legend(legend);
  return svg.render();
}

/** identity.csv: master-identity residual vs dt, with an order-2 guide. */
export function renderIdentityResidual(csvText: string): string {
  const rows = parseCsv(csvText, [...SCHEMAS.identity_residual]);
  const area = plotArea();
  const sorted = [...rows].sort((a, b) => num(a, "dt") - num(b, "dt"));
  const xs = sorted.map((r) => num(r, "dt"));
  const ys = sorted.map((r) => num(r, "residual"));
  const xScale = makeScale(xs, area.x, true);
  const yScale = makeScale(ys, area.y, true);

  const svg = new SvgBuilder();
  svg.title("Energy-identity residual vs time step");
  svg.axes(xScale, yScale, "time step dt", "centered-difference residual");
  const color = SERIES_COLORS[0];
  const pts = sorted.map(
    (r): [number, number] => [xScale(num(r, "dt")), yScale(num(r, "residual"))],
  );
  if (pts.length > 1) svg.polyline(pts, color);
  for (const [px, py] of pts) svg.circle(px, py, 3, color);

  // order-2 reference through the finest point
  if (xs.length > 1 && ys[0] > 0) {
    const guide = xs.map(
      (dt): [number, number] => [xScale(dt), yScale(ys[0] * Math.pow(dt / xs[0], 2))],
    );
    svg.polyline(guide, "#888", 1);
    svg.legend([
      { label: "residual", color },
      { label: "O(dt^2) guide", color: "#888" },
    ]);
  } else {
    svg.legend([{ label: "residual", color }]);
  }
  return svg.render();
}

export const RENDERERS: Record<PlotKind, (csvText: string) => string> = {
  convergence: renderConvergence,
  drift: renderDrift,
  noise_fit: renderNoiseFit,
  identity_residual: renderIdentityResidual,
};
