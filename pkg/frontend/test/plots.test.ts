import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { CsvSchemaError } from "../src/csv.js";
import {
  RENDERERS,
  renderConvergence,
  renderDrift,
  renderIdentityResidual,
  renderNoiseFit,
} from "../src/plots.js";

const fixtures = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const golden = (name: string) => readFileSync(join(fixtures, name), "utf8");

const countMatches = (text: string, re: RegExp) => (text.match(re) ?? []).length;

describe("golden renders", () => {
  it("convergence renders one series per gamma with rate annotations", () => {
    const svg = renderConvergence(golden("distances.csv"));
    expect(svg).toMatch(/^<svg /);
    expect(svg).toContain("gamma=0.5 (rate 0.82)");
    expect(svg).toContain("gamma=0 (rate 0.90)");
    expect(countMatches(svg, /<polyline/g)).toBe(2);
  });

  it("drift renders mass, hamiltonian and E series", () => {
    const svg = renderDrift(golden("energy.csv"));
    for (const label of ["mass", "hamiltonian", "E"]) expect(svg).toContain(`>${label}<`);
    expect(countMatches(svg, /<polyline/g)).toBe(3);
    expect(svg).not.toContain("NaN");
  });

  it("noise_fit renders one series per norm with whiskers", () => {
    const svg = renderNoiseFit(golden("stats.csv"));
    expect(svg).toContain("grad_Y_eps_Lq");
    expect(svg).toContain("exp_negY_Linf");
    expect(svg).not.toContain("NaN");
  });

  it("identity_residual renders the data and an order-2 guide", () => {
    const svg = renderIdentityResidual(golden("identity.csv"));
    expect(svg).toContain("O(dt^2) guide");
    expect(countMatches(svg, /<polyline/g)).toBe(2);
  });

  it("every renderer is deterministic", () => {
    const inputs: Record<string, string> = {
      convergence: golden("distances.csv"),
      drift: golden("energy.csv"),
      noise_fit: golden("stats.csv"),
      identity_residual: golden("identity.csv"),
    };
    for (const [kind, text] of Object.entries(inputs)) {
      const render = RENDERERS[kind as keyof typeof RENDERERS];
      expect(render(text)).toBe(render(text));
    }
  });
});

describe("degenerate inputs", () => {
  it("convergence handles exact-zero distances (log clip, no NaN)", () => {
    // the reference family member reruns bit-identically: sup_dist = 0
    const svg = renderConvergence(golden("distances.csv"));
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
  });

  it("drift handles an exactly conserved column", () => {
    const csv =
      "t,mass,hamiltonian,F,G,E,H,l2,h1,h2,wdelta\n" +
      "0,4.0,2.0,1,1,1,0,1,1,1,0\n" +
      "0.5,4.0,2.0000001,1,1,1,0,1,1,1,0\n";
    const svg = renderDrift(csv);
    expect(svg).not.toContain("NaN");
  });

  it("single-row input renders points without polylines", () => {
    const svg = renderIdentityResidual("dt,residual\n0.001,1e-5\n");
    expect(svg).toMatch(/^<svg /);
    expect(countMatches(svg, /<polyline/g)).toBe(0);
    expect(countMatches(svg, /<circle/g)).toBe(1);
  });

  it("single-row convergence renders", () => {
    const svg = renderConvergence("eps,gamma,sup_dist,kappa_hat\n0.25,0.5,0.4,nan\n");
    expect(svg).not.toContain("NaN ");
    expect(countMatches(svg, /<circle/g)).toBe(1);
  });

  it("missing columns raise a schema error naming the column", () => {
    expect(() => renderDrift("t,mass\n0,1\n")).toThrowError(CsvSchemaError);
    expect(() => renderDrift("t,mass\n0,1\n")).toThrowError(/hamiltonian/);
  });
});
