/** Minimal deterministic SVG document builder (no DOM, no randomness). */

import { Scale, formatTick } from "./scale.js";

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 36, right: 24, bottom: 48, left: 64 };

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#7f7f7f",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

const fmt = (x: number) => Number(x.toFixed(2)).toString();

export class SvgBuilder {
  private parts: string[] = [];

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; size?: number; fill?: string; rotate?: boolean } = {}): void {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 12;
    const fill = opts.fill ?? "#000";
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif" fill="${fill}"${transform}>${esc(content)}</text>`,
    );
  }

  /** Axes with tick marks and labels for the given scales. */
  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const tick of xScale.ticks()) {
      const px = xScale(tick);
      if (px < x0 - 0.5 || px > x1 + 0.5) continue;
      this.line(px, y0, px, y0 + 5, "#000");
      this.text(px, y0 + 18, formatTick(tick), { anchor: "middle", size: 10 });
    }
    for (const tick of yScale.ticks()) {
      const py = yScale(tick);
      if (py > y0 + 0.5 || py < y1 - 0.5) continue;
      this.line(x0 - 5, py, x0, py, "#000");
      this.text(x0 - 8, py + 3, formatTick(tick), { anchor: "end", size: 10 });
    }
    this.text((x0 + x1) / 2, HEIGHT - 10, xLabel, { anchor: "middle" });
    this.text(16, (y0 + y1) / 2, yLabel, { anchor: "middle", rotate: true });
  }

  legend(entries: Array<{ label: string; color: string }>): void {
    entries.forEach((e, i) => {
      const y = MARGIN.top + 14 * i;
      const x = WIDTH - MARGIN.right - 150;
      this.line(x, y, x + 18, y, e.color, 2);
      this.text(x + 24, y + 4, e.label, { size: 10 });
    });
  }

  title(content: string): void {
    this.text(WIDTH / 2, 20, content, { anchor: "middle", size: 14 });
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      ...this.parts,
      `</svg>`,
    ].join("\n");
  }
}

export function plotArea(): { x: [number, number]; y: [number, number] } {
  return {
    x: [MARGIN.left, WIDTH - MARGIN.right],
    y: [HEIGHT - MARGIN.bottom, MARGIN.top], // inverted: SVG y grows downward
  };
}
