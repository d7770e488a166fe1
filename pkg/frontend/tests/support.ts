/**
 * Shared fixtures and comparators for the shim test suites.
 *
 * Parity fixtures are generated by the core repo's
 * scripts/export_parity_fixtures.py; numbers on both sides are shortest
 * round-trip decimals, so equality checks below are bit-level.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { expect } from "vitest";

import type { ReportEntry } from "../src/index.js";

export interface ExpectedEntry {
  metric: string;
  targets: string[];
  values: (number | null)[];
  errors: (string | null)[];
  warnings?: string[];
  aggregate: number | null;
  cells?: (number | null)[][];
}

export interface DisentFixture {
  index?: number;
  rho?: number;
  z: number[][];
  a: number[][];
  reg?: number[];
  expected: Record<string, ExpectedEntry>;
}

export interface TraceFixture {
  samples: number;
  attributes: number;
  delta: number;
  epsilon: number;
  rows: number[][];
  expected: { smoothness: ExpectedEntry; monotonicity: ExpectedEntry };
}

export interface ParityFile {
  generated_by: string;
  seed: number;
  k_neighbors: number;
  discrete: DisentFixture[];
  gaussian: DisentFixture[];
  perfect: DisentFixture;
  sap_continuous: DisentFixture;
  dependency: { z: number[][]; a: number[][]; reg: number[]; expected_bundle: ExpectedEntry[] };
  reduction: DisentFixture[];
  closed_form_traces: TraceFixture;
  trace_chunks: TraceFixture[];
}

const here = dirname(fileURLToPath(import.meta.url));

export function loadParity(): ParityFile {
  const text = readFileSync(join(here, "fixtures", "parity.json"), "utf8");
  return JSON.parse(text) as ParityFile;
}

function expectBit(
  got: number | null | undefined,
  want: number | null | undefined,
  label: string
): void {
  if (want === null || want === undefined) {
    expect(got, label).toBeNull();
  } else {
    // toBe is Object.is, so this distinguishes -0 from 0 and fails on
    // any ULP-level drift
    expect(got, label).toBe(want);
  }
}

/** Assert a shim report entry matches an exported core entry bit-for-bit. */
export function expectEntryParity(got: ReportEntry, want: ExpectedEntry, label: string): void {
  expect(got.metric, label).toBe(want.metric);
  expect(got.targets, label).toEqual(want.targets);
  expect(got.values.length, `${label}: values length`).toBe(want.values.length);
  for (let i = 0; i < want.values.length; i += 1) {
    expectBit(got.values[i], want.values[i], `${label}: values[${i}]`);
  }
  expect(got.errors, label).toEqual(want.errors);
  if (want.warnings !== undefined) {
    expect(got.warnings, label).toEqual(want.warnings);
  }
  expectBit(got.aggregate, want.aggregate, `${label}: aggregate`);
  if (want.cells !== undefined) {
    const cells = got.cells;
    expect(cells, `${label}: cells missing`).toBeDefined();
    expect(cells!.length, `${label}: cells height`).toBe(want.cells.length);
    for (let r = 0; r < want.cells.length; r += 1) {
      const wantRow = want.cells[r]!;
      const gotRow = cells![r]!;
      expect(gotRow.length, `${label}: cells[${r}] width`).toBe(wantRow.length);
      for (let c = 0; c < wantRow.length; c += 1) {
        expectBit(gotRow[c], wantRow[c], `${label}: cells[${r}][${c}]`);
      }
    }
  }
}

/** Fold an exported (S*A) x K table back into the 3-D trace shape. */
export function rebuildTrace(rows: number[][], samples: number, attributes: number): number[][][] {
  const trace: number[][][] = [];
  for (let s = 0; s < samples; s += 1) {
    trace.push(rows.slice(s * attributes, (s + 1) * attributes));
  }
  return trace;
}
