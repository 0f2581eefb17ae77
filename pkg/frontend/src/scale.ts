/** Deterministic axis scales with explicit handling of degenerate data. */

export interface Scale {
  /** Map a data value to a pixel coordinate. */
  (value: number): number;
  readonly domain: [number, number];
  readonly range: [number, number];
  readonly log: boolean;
  /** Tick values in data space, ascending. */
  ticks(): number[];
}

/** Smallest positive value admitted on a log scale; zeros are clipped here. */
export const LOG_FLOOR = 1e-300;

export function clipPositive(value: number, floor: number): number {
  return value > 0 ? value : floor;
}

function padDomain(lo: number, hi: number, log: boolean): [number, number] {
  if (lo === hi) {
    // single-value domain: widen symmetrically so the point sits mid-axis
    return log ? [lo / 10, hi * 10] : [lo - Math.max(1, Math.abs(lo)), hi + Math.max(1, Math.abs(hi))];
  }
  return [lo, hi];
}

function linearTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + s * 1e-9; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const lower = Math.ceil(Math.log10(lo) - 1e-9);
  const upper = Math.floor(Math.log10(hi) + 1e-9);
  for (let e = lower; e <= upper; e += 1) ticks.push(Math.pow(10, e));
  // guarantee at least two ticks so the axis is legible on narrow domains
  if (ticks.length < 2) return [lo, hi];
  return ticks;
}

export function makeScale(
  values: number[],
  range: [number, number],
  log: boolean,
): Scale {
  if (values.length === 0) throw new Error("cannot scale an empty value set");
  const cleaned = log ? values.map((v) => clipPositive(v, LOG_FLOOR)) : values;
  let lo = Math.min(...cleaned);
  let hi = Math.max(...cleaned);
  [lo, hi] = padDomain(lo, hi, log);

  const t = (v: number) => {
    const x = log ? clipPositive(v, LOG_FLOOR) : v;
    const f = log
      ? (Math.log10(x) - Math.log10(lo)) / (Math.log10(hi) - Math.log10(lo))
      : (x - lo) / (hi - lo);
    return range[0] + f * (range[1] - range[0]);
  };
  const scale = t as Scale & { domain: [number, number]; range: [number, number]; log: boolean; ticks: () => number[] };
  Object.assign(scale, {
    domain: [lo, hi] as [number, number],
    range,
    log,
    ticks: () => (log ? logTicks(lo, hi) : linearTicks(lo, hi)),
  });
  return scale;
}

/** Fixed-notation tick label that round-trips cleanly across runs. */
export function formatTick(value: number): string {
  if (value === 0) return "0";
  const e = Math.floor(Math.log10(Math.abs(value)));
  if (e < -3 || e > 4) return value.toExponential(0).replace("+", "");
  return Number(value.toPrecision(6)).toString();
}
