import { describe, expect, it } from "vitest";
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join } from "node:path";

const cliPath = fileURLToPath(new URL("../dist/cli.js", import.meta.url));
const fixturePath = (name: string) =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
const goldenPath = (name: string) =>
  fileURLToPath(new URL(`./golden/${name}`, import.meta.url));

function runCli(args: string[]): { code: number; stdout: string; stderr: string } {
  try {
    const stdout = execFileSync("node", [cliPath, ...args], { encoding: "utf-8" });
    return { code: 0, stdout, stderr: "" };
  } catch (err: any) {
    return { code: err.status ?? 1, stdout: err.stdout ?? "", stderr: err.stderr ?? "" };
  }
}

describe("figgen cli", () => {
  it("renders every fixture table without error", () => {
    const dir = mkdtempSync(join(tmpdir(), "figgen-"));
    const jobs: [string, string[]][] = [
      ["two_point_sweep.csv", ["--kind", "loglog-sweep"]],
      ["zero_drift.csv", ["--kind", "drift"]],
      ["conservation_drift.csv", ["--kind", "drift", "--group", "invariant"]],
      [
        "kdv_compare_errors.csv",
        ["--kind", "loglog-sweep", "--where", "series=err_N", "--where", "tau=1"],
      ],
      ["kdv_compare_snapshot.csv", ["--kind", "overlay", "--group", "series", "--xcolumn", "x"]],
    ];
    for (const [name, args] of jobs) {
      const out = join(dir, name.replace(".csv", ".svg"));
      const res = runCli([...args, "--in", fixturePath(name), "--out", out]);
      expect(res.code, `${name}: ${res.stderr}`).toBe(0);
      expect(readFileSync(out, "utf-8")).toContain("</svg>");
    }
  });

  it("reads figure specs from a key = value file", () => {
    const dir = mkdtempSync(join(tmpdir(), "figgen-"));
    const out = join(dir, "spec.svg");
    const spec = join(dir, "figure.spec");
    writeFileSync(
      spec,
      [
        "kind = loglog-sweep",
        `in = ${fixturePath("two_point_sweep.csv")}`,
        `out = ${out}`,
        "title = synthetic sweep",
        "",
      ].join("\n"),
    );
    const res = runCli(["--spec", spec]);
    expect(res.code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("slope 2.00");
    expect(svg).toContain("synthetic sweep");
  });

  it("fails usefully on malformed input", () => {
    const dir = mkdtempSync(join(tmpdir(), "figgen-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "epsilon,tau,value\n0.1,0\n");
    const res = runCli(["--kind", "drift", "--in", bad, "--out", join(dir, "x.svg")]);
    expect(res.code).toBe(1);
    expect(res.stderr).toContain("row 2");
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(runCli(["--kind", "pie", "--in", "a", "--out", "b"]).code).toBe(2);
    expect(runCli(["--kind", "drift"]).code).toBe(2);
  });

  it("matches the committed goldens byte-for-byte (declared pixel tolerance: 0)", () => {
    const dir = mkdtempSync(join(tmpdir(), "figgen-"));
    const cases: [string, string, string[]][] = [
      ["two_point_sweep.csv", "two_point_sweep.svg", ["--kind", "loglog-sweep"]],
      [
        "kdv_compare_snapshot.csv",
        "kdv_compare_overlay.svg",
        ["--kind", "overlay", "--group", "series", "--xcolumn", "x"],
      ],
    ];
    for (const [input, golden, args] of cases) {
      const out = join(dir, golden);
      const res = runCli([...args, "--in", fixturePath(input), "--out", out]);
      expect(res.code).toBe(0);
      expect(readFileSync(out, "utf-8")).toBe(readFileSync(goldenPath(golden), "utf-8"));
    }
  });
});
