// CSV ingestion for run artifacts.  Schema validation happens here, up
// front, so a malformed file fails with the file name and the offending
// column before any figure assembly starts.

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  file: string;
  columns: string[];
  rows: string[][];
}

export function readTable(file: string, required: string[]): Table {
  let text: string;
  try {
    text = readFileSync(file, "utf-8");
  } catch {
    throw new Error(`${file}: cannot read input CSV`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${file}: parse error at row ${e.row}: ${e.message}`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new Error(`${file}: empty file, expected a header row`);
  }
  const columns = data[0];
  for (const name of required) {
    if (!columns.includes(name)) {
      throw new Error(`${file}: missing column '${name}'`);
    }
  }
  const rows = data.slice(1);
  for (let i = 0; i < rows.length; i++) {
    if (rows[i].length !== columns.length) {
      throw new Error(
        `${file}: row ${i + 1} has ${rows[i].length} cells, expected ${columns.length}`,
      );
    }
  }
  return { file, columns, rows };
}

export function strColumn(table: Table, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.file}: missing column '${name}'`);
  }
  return table.rows.map((row) => row[idx]);
}

// Numeric column; "nan" cells come through as NaN (the benchmark table
// uses them for thresholds no run attained), anything else non-numeric
// is a schema error.
export function numColumn(table: Table, name: string): number[] {
  const cells = strColumn(table, name);
  return cells.map((cell, i) => {
    const value = Number(cell);
    if (Number.isNaN(value) && cell.trim().toLowerCase() !== "nan") {
      throw new Error(
        `${table.file}: column '${name}' row ${i + 1}: not a number: '${cell}'`,
      );
    }
    return value;
  });
}

// Pick out the rows where a string column takes a given value.
export function whereEq(table: Table, name: string, value: string): Table {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.file}: missing column '${name}'`);
  }
  return {
    file: table.file,
    columns: table.columns,
    rows: table.rows.filter((row) => row[idx] === value),
  };
}
