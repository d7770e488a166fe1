/**
 * Functional metric API over the core CLI.
 *
 * Every call writes its arrays to temporary NPY files, invokes the core
 * once, and parses the JSON report back; no metric math happens here.
 * Numbers round-trip bit-exactly in both directions (f8 payloads out,
 * 17-significant-digit JSON back), so results are bit-identical to
 * invoking the core directly with the same seed.
 */

import { commonFlags, disentFlags, type DisentOptions, type EstimatorOptions } from "./flags.js";
import { assertMatrix, type Matrix } from "./npy.js";
import { parseReport, type ReportDocument, type ReportEntry } from "./report.js";
import { invokeCliWithMatrices } from "./runner.js";

export type { DisentOptions, EstimatorOptions } from "./flags.js";
export { assertMatrix, encodeNpyMatrix, type Matrix } from "./npy.js";
export { parseReport, type ReportConfig, type ReportDocument, type ReportEntry } from "./report.js";
export { CoreCliError, invokeCli } from "./runner.js";
export { MetricSession, createSession, type SessionSpec } from "./session.js";

export interface TraceOptions extends EstimatorOptions {
  /** Latent step between adjacent grid points; must be positive. */
  delta: number;
  /** Noise threshold for monotonicity. Default: 0. */
  epsilon?: number;
}

/** S x A x K interpolation measurements: sample, attribute, grid step. */
export type Trace = ReadonlyArray<ReadonlyArray<ReadonlyArray<number>>>;

export const DISENTANGLEMENT_METRICS = ["mig", "sap", "modularity", "dmig", "xmig", "dlig"] as const;
export type DisentMetricId = (typeof DISENTANGLEMENT_METRICS)[number];

function runDisent(metrics: readonly string[], z: Matrix, a: Matrix, options: DisentOptions): ReportDocument {
  assertMatrix("latents", z);
  assertMatrix("attributes", a);
  const stdout = invokeCliWithMatrices({ z, a }, (paths) => [
    "disent",
    "--latents", paths.z!,
    "--attributes", paths.a!,
    "--metrics", metrics.join(","),
    ...disentFlags(options),
  ]);
  return parseReport(stdout);
}

function singleEntry(document: ReportDocument, metric: string): ReportEntry {
  const entry = document.results.find((result) => result.metric === metric);
  if (entry === undefined) {
    throw new Error(`core report is missing the ${metric} entry`);
  }
  return entry;
}

/** Run several disentanglement metrics in one core invocation. */
export function disentanglement(
  metrics: readonly DisentMetricId[],
  z: Matrix,
  a: Matrix,
  options: DisentOptions = {}
): ReportDocument {
  return runDisent(metrics, z, a, options);
}

/** Mutual information gap per attribute. */
export function mig(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  return singleEntry(runDisent(["mig"], z, a, options), "mig");
}

/** Separated attribute predictability per attribute. */
export function sap(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  return singleEntry(runDisent(["sap"], z, a, options), "sap");
}

/** Modularity per latent dimension. */
export function modularity(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  return singleEntry(runDisent(["modularity"], z, a, options), "modularity");
}

/** Dependency-aware MIG per attribute. */
export function dmig(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  return singleEntry(runDisent(["dmig"], z, a, options), "dmig");
}

const XMIG_UNDEFINED = "xmig is undefined: every latent dimension regularizes an attribute";

/**
 * Exclusive MIG per attribute.
 *
 * Reports embed the fully-covered-map case as per-target errors; the
 * functional core call throws for it, and this shim mirrors the throw.
 */
export function xmig(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  const entry = singleEntry(runDisent(["xmig"], z, a, options), "xmig");
  if (entry.errors.length > 0 && entry.errors.every((error) => error === XMIG_UNDEFINED)) {
    throw new Error(XMIG_UNDEFINED);
  }
  return entry;
}

/** Dependency-blind latent information gap per regularized dimension. */
export function dlig(z: Matrix, a: Matrix, options: DisentOptions = {}): ReportEntry {
  return singleEntry(runDisent(["dlig"], z, a, options), "dlig");
}

/** Run a named metric bundle; returns the whole report document. */
export function bundle(name: string, z: Matrix, a: Matrix, options: DisentOptions = {}): ReportDocument {
  assertMatrix("latents", z);
  assertMatrix("attributes", a);
  const stdout = invokeCliWithMatrices({ z, a }, (paths) => [
    "bundle",
    "--bundle", name,
    "--latents", paths.z!,
    "--attributes", paths.a!,
    ...disentFlags(options),
  ]);
  return parseReport(stdout);
}

/** Validate an S x A x K trace and report its dimensions. */
export function traceShape(trace: unknown): { samples: number; attributes: number; steps: number } {
  if (!Array.isArray(trace) || trace.length === 0) {
    throw new Error("trace must be a 3-D array shaped samples x attributes x steps");
  }
  const first = trace[0];
  if (!Array.isArray(first) || first.length === 0 || !Array.isArray(first[0])) {
    throw new Error("trace must be a 3-D array shaped samples x attributes x steps");
  }
  const attributes = first.length;
  const steps = (first[0] as unknown[]).length;
  for (const sample of trace) {
    if (!Array.isArray(sample) || sample.length !== attributes) {
      throw new Error(`trace samples must all have ${attributes} attribute rows`);
    }
    for (const row of sample) {
      if (!Array.isArray(row) || row.length !== steps) {
        throw new Error(`trace rows must all have ${steps} grid steps`);
      }
    }
  }
  return { samples: trace.length, attributes, steps };
}

/** Flatten a trace to the CLI's (S*A) x K sample-major table. */
export function traceRows(trace: Trace): number[][] {
  const rows: number[][] = [];
  for (const sample of trace) {
    for (const row of sample) {
      rows.push(row.slice());
    }
  }
  return rows;
}

function runInterp(metrics: readonly string[], trace: Trace, options: TraceOptions): ReportDocument {
  const { samples, attributes } = traceShape(trace);
  const flags = [
    "--samples", String(samples),
    "--attributes", String(attributes),
    "--delta", String(options.delta),
    "--metrics", metrics.join(","),
    ...commonFlags(options),
  ];
  if (options.epsilon !== undefined) {
    flags.push("--epsilon", String(options.epsilon));
  }
  const stdout = invokeCliWithMatrices({ trace: traceRows(trace) }, (paths) => [
    "interp",
    "--trace", paths.trace!,
    ...flags,
  ]);
  return parseReport(stdout);
}

/** Run both interpolatability metrics in one core invocation. */
export function interpolatability(trace: Trace, options: TraceOptions): ReportDocument {
  return runInterp(["smoothness", "monotonicity"], trace, options);
}

/** Smoothness per attribute, with the per-(sample, attribute) cell grid. */
export function smoothness(trace: Trace, options: TraceOptions): ReportEntry {
  return singleEntry(runInterp(["smoothness"], trace, options), "smoothness");
}

/** Monotonicity per attribute, with the per-(sample, attribute) cell grid. */
export function monotonicity(trace: Trace, options: TraceOptions): ReportEntry {
  return singleEntry(runInterp(["monotonicity"], trace, options), "monotonicity");
}
