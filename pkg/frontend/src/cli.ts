#!/usr/bin/env node
/**
 * figgen - render experiment CSV tables into deterministic SVG figures.
 *
 * Usage:
 *   figgen --kind loglog-sweep --in sweep.csv --out fig.svg [--where col=v ...]
 *   figgen --spec figure.spec          (key = value file with the same fields)
 *
 * Spec/flag keys: kind, in, out, xlabel, ylabel, title, group, xcolumn, where
 * (where may repeat; comma-joined in a spec file).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv, CsvError, RowFilter } from "./csv.js";
import { FigureKind, FigureOptions, renderFigure } from "./figures.js";

interface CliConfig {
  kind: string;
  input: string;
  output: string;
  options: FigureOptions;
}

export function parseSpecText(text: string): Map<string, string[]> {
  const out = new Map<string, string[]>();
  text.split(/\r?\n/).forEach((raw, idx) => {
    const line = raw.split("#", 1)[0].trim();
    if (!line) return;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new Error(`spec line ${idx + 1}: expected 'key = value', got '${raw}'`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (!out.has(key)) out.set(key, []);
    out.get(key)!.push(value);
  });
  return out;
}

function parseWhere(items: string[]): RowFilter[] {
  return items.flatMap((item) =>
    item
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0)
      .map((clause) => {
        const eq = clause.indexOf("=");
        if (eq < 0) {
          throw new Error(`--where expects col=value, got '${clause}'`);
        }
        return { column: clause.slice(0, eq).trim(), value: clause.slice(eq + 1).trim() };
      }),
  );
}

export function parseArgs(argv: string[]): CliConfig {
  const values = new Map<string, string[]>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument '${arg}'`);
    }
    const key = arg.slice(2);
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`flag --${key} needs a value`);
    }
    i += 1;
    if (!values.has(key)) values.set(key, []);
    values.get(key)!.push(value);
  }
  if (values.has("spec")) {
    const spec = parseSpecText(readFileSync(values.get("spec")![0], "utf-8"));
    for (const [k, list] of spec) {
      if (!values.has(k)) values.set(k, list);
    }
  }
  const take = (key: string): string | undefined => values.get(key)?.[0];
  const kind = take("kind");
  const input = take("in");
  const output = take("out");
  if (!kind || !input || !output) {
    throw new Error("required: --kind, --in, --out (directly or via --spec)");
  }
  if (!["loglog-sweep", "drift", "overlay"].includes(kind)) {
    throw new Error(`unknown kind '${kind}' (loglog-sweep | drift | overlay)`);
  }
  return {
    kind,
    input,
    output,
    options: {
      kind: kind as FigureKind,
      xLabel: take("xlabel"),
      yLabel: take("ylabel"),
      title: take("title"),
      group: take("group"),
      xColumn: take("xcolumn"),
      where: parseWhere(values.get("where") ?? []),
    },
  };
}

export function run(argv: string[]): number {
  let config: CliConfig;
  try {
    config = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`figgen: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const table = parseCsv(readFileSync(config.input, "utf-8"));
    const svg = renderFigure(table, config.options);
    writeFileSync(config.output, svg, "utf-8");
    process.stdout.write(`wrote ${config.output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      process.stderr.write(`figgen: ${config.input}: ${err.message}\n`);
      return 1;
    }
    process.stderr.write(`figgen: ${(err as Error).message}\n`);
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("figgen")) {
  process.exit(run(process.argv.slice(2)));
}
