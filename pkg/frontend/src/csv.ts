/**
 * Parser for the experiment CSV contract: a header row starting with
 * `epsilon,tau,value`, optional extra columns, 17-significant-digit decimal
 * fields.  Errors name the offending row and column.
 */

export interface CsvTable {
  header: string[];
  /** column name -> values; numeric columns parsed, others kept as strings */
  columns: Map<string, (number | string)[]>;
  rowCount: number;
}

export class CsvError extends Error {
  constructor(message: string, row?: number, column?: string) {
    const where =
      row !== undefined
        ? ` (row ${row}${column !== undefined ? `, column ${column}` : ""})`
        : "";
    super(`${message}${where}`);
    this.name = "CsvError";
  }
}

const REQUIRED_PREFIX = ["epsilon", "tau", "value"];

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV input");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  REQUIRED_PREFIX.forEach((name, i) => {
    if (header[i] !== name) {
      throw new CsvError(
        `header must start with '${REQUIRED_PREFIX.join(",")}', got '${lines[0]}'`,
        1,
        name,
      );
    }
  });
  const columns = new Map<string, (number | string)[]>(header.map((h) => [h, []]));
  for (let r = 1; r < lines.length; r++) {
    const parts = lines[r].split(",");
    if (parts.length !== header.length) {
      throw new CsvError(
        `expected ${header.length} fields, found ${parts.length}`,
        r + 1,
      );
    }
    parts.forEach((raw, c) => {
      const name = header[c];
      const trimmed = raw.trim();
      const asNumber = Number(trimmed);
      if (trimmed !== "" && Number.isFinite(asNumber)) {
        columns.get(name)!.push(asNumber);
      } else if (name === "epsilon" || name === "tau" || name === "value") {
        throw new CsvError(`non-numeric value '${trimmed}'`, r + 1, name);
      } else {
        columns.get(name)!.push(trimmed);
      }
    });
  }
  return { header, columns, rowCount: lines.length - 1 };
}

export interface RowFilter {
  column: string;
  value: string;
}

/** Keep rows whose `column` textual value equals `value`. */
export function filterRows(table: CsvTable, filters: RowFilter[]): CsvTable {
  if (filters.length === 0) return table;
  for (const f of filters) {
    if (!table.header.includes(f.column)) {
      throw new CsvError(`unknown filter column '${f.column}'`);
    }
  }
  const keep: number[] = [];
  for (let i = 0; i < table.rowCount; i++) {
    const ok = filters.every((f) => {
      const cell = table.columns.get(f.column)![i];
      return String(cell) === f.value || Number(cell) === Number(f.value);
    });
    if (ok) keep.push(i);
  }
  const columns = new Map<string, (number | string)[]>();
  for (const name of table.header) {
    const source = table.columns.get(name)!;
    columns.set(
      name,
      keep.map((i) => source[i]),
    );
  }
  return { header: table.header, columns, rowCount: keep.length };
}

export function numericColumn(table: CsvTable, name: string): number[] {
  const column = table.columns.get(name);
  if (column === undefined) {
    throw new CsvError(`missing column '${name}'`);
  }
  return column.map((v, i) => {
    if (typeof v !== "number") {
      throw new CsvError(`non-numeric value '${v}'`, i + 2, name);
    }
    return v;
  });
}
