import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { main } from "../src/cli.js";

const fixtures = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const workdir = () => mkdtempSync(join(tmpdir(), "report-plots-"));

describe("cli", () => {
  it("renders each kind from its golden CSV", () => {
    const out = workdir();
    const cases: Array<[string, string]> = [
      ["convergence", "distances.csv"],
      ["drift", "energy.csv"],
      ["noise_fit", "stats.csv"],
      ["identity_residual", "identity.csv"],
    ];
    for (const [kind, file] of cases) {
      const dest = join(out, `${kind}.svg`);
      const code = main([
        "render", "--kind", kind, "--in", join(fixtures, file), "--out", dest,
      ]);
      expect(code).toBe(0);
      expect(readFileSync(dest, "utf8")).toMatch(/^<svg /);
    }
  });

  it("returns 1 on a schema mismatch", () => {
    const out = workdir();
    const bad = join(out, "bad.csv");
    writeFileSync(bad, "t,mass\n0,1\n");
    const code = main([
      "render", "--kind", "drift", "--in", bad, "--out", join(out, "x.svg"),
    ]);
    expect(code).toBe(1);
  });

  it("returns 3 when the input file is unreadable", () => {
    const out = workdir();
    const code = main([
      "render", "--kind", "drift",
      "--in", join(out, "absent.csv"), "--out", join(out, "x.svg"),
    ]);
    expect(code).toBe(3);
  });
});
