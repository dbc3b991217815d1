import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { numColumn, readTable, strColumn, whereEq } from "../src/csv.js";

function tempCsv(name: string, text: string): string {
  const dir = mkdtempSync(join(tmpdir(), "zr-csv-"));
  const file = join(dir, name);
  writeFileSync(file, text);
  return file;
}

describe("readTable", () => {
  it("parses a well-formed table", () => {
    const file = tempCsv("a.csv", "x,y\n1,2\n3,4\n");
    const table = readTable(file, ["x", "y"]);
    expect(table.columns).toEqual(["x", "y"]);
    expect(table.rows).toEqual([
      ["1", "2"],
      ["3", "4"],
    ]);
  });

  it("names the file and the missing column", () => {
    const file = tempCsv("sweep.csv", "g_max,n_max\n1,2\n");
    expect(() => readTable(file, ["g_max", "ppo_snr"])).toThrowError(
      /sweep\.csv: missing column 'ppo_snr'/,
    );
  });

  it("rejects ragged rows with the row number", () => {
    const file = tempCsv("t.csv", "x,y\n1,2\n3\n");
    expect(() => readTable(file, ["x"])).toThrowError(/t\.csv: row 2 has 1 cells/);
  });

  it("rejects unreadable paths", () => {
    expect(() => readTable("/nonexistent/nope.csv", [])).toThrowError(
      /nope\.csv: cannot read/,
    );
  });

  it("accepts a header-only file as zero rows", () => {
    const file = tempCsv("empty.csv", "x,y\n");
    expect(readTable(file, ["x", "y"]).rows).toEqual([]);
  });
});

describe("columns", () => {
  it("parses numeric cells and allows nan", () => {
    const file = tempCsv("b.csv", "v\n1.5\nnan\n-2e3\n");
    const v = numColumn(readTable(file, ["v"]), "v");
    expect(v[0]).toBe(1.5);
    expect(Number.isNaN(v[1])).toBe(true);
    expect(v[2]).toBe(-2000);
  });

  it("rejects non-numeric cells with file, column, and row", () => {
    const file = tempCsv("c.csv", "v\n1\nbogus\n");
    expect(() => numColumn(readTable(file, ["v"]), "v")).toThrowError(
      /c\.csv: column 'v' row 2: not a number: 'bogus'/,
    );
  });

  it("filters rows by string value", () => {
    const file = tempCsv("bench.csv", "mode,threshold\nseeded,3.8\nunseeded,3.8\nseeded,4.5\n");
    const table = readTable(file, ["mode", "threshold"]);
    const seeded = whereEq(table, "mode", "seeded");
    expect(strColumn(seeded, "threshold")).toEqual(["3.8", "4.5"]);
  });
});
