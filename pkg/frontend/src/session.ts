/**
 * Streaming sessions: buffer update batches, run the core once at compute.
 *
 * The core guarantees that computing on a concatenation of batches is
 * bit-identical to a single-shot run, so buffering client-side and making
 * one CLI call preserves the streaming contract exactly.
 */

import { commonFlags, disentFlags, type DisentOptions, type EstimatorOptions } from "./flags.js";
import { assertMatrix, type Matrix } from "./npy.js";
import { parseReport, type ReportDocument } from "./report.js";
import { invokeCliWithMatrices } from "./runner.js";

import type { DisentMetricId, Trace } from "./index.js";

type InterpMetricId = "smoothness" | "monotonicity";

/** What a session computes: one metric, one trace metric, or a bundle. */
export type SessionSpec =
  | { metric: DisentMetricId; options?: DisentOptions }
  | { metric: InterpMetricId; delta: number; epsilon?: number; options?: EstimatorOptions }
  | { bundle: string; options?: DisentOptions };

interface UpdateBatch {
  z?: Matrix;
  a?: Matrix;
  trace?: Trace;
}

const INTERP_IDS = new Set<string>(["smoothness", "monotonicity"]);

export class MetricSession {
  private readonly spec: SessionSpec;
  private readonly wantsTrace: boolean;
  private zRows: number[][] = [];
  private aRows: number[][] = [];
  private traceSamples: number[][][] = [];

  constructor(spec: SessionSpec) {
    this.spec = spec;
    this.wantsTrace = "metric" in spec && INTERP_IDS.has(spec.metric);
    if (this.wantsTrace) {
      const delta = (spec as { delta?: number }).delta;
      if (typeof delta !== "number" || !(delta > 0)) {
        throw new Error(`${(spec as { metric: string }).metric} needs a positive delta`);
      }
    }
  }

  /** Append one batch; rows accumulate until compute. */
  update(batch: UpdateBatch): void {
    if (this.wantsTrace) {
      this.updateTrace(batch);
    } else {
      this.updateRows(batch);
    }
  }

  private updateRows(batch: UpdateBatch): void {
    if (batch.trace !== undefined) {
      throw new Error("this session takes z= and a= batches, not trace=");
    }
    if (batch.z === undefined || batch.a === undefined) {
      throw new Error("update needs both z= and a=");
    }
    assertMatrix("z", batch.z);
    assertMatrix("a", batch.a);
    if (batch.z.length !== batch.a.length) {
      throw new Error(`z has ${batch.z.length} rows but a has ${batch.a.length}`);
    }
    if (this.zRows.length > 0) {
      if (batch.z[0]!.length !== this.zRows[0]!.length) {
        throw new Error(
          `latent width changed: buffered ${this.zRows[0]!.length} columns, got ${batch.z[0]!.length}`
        );
      }
      if (batch.a[0]!.length !== this.aRows[0]!.length) {
        throw new Error(
          `attribute width changed: buffered ${this.aRows[0]!.length} columns, got ${batch.a[0]!.length}`
        );
      }
    }
    for (const row of batch.z) this.zRows.push(row.slice());
    for (const row of batch.a) this.aRows.push(row.slice());
  }

  private updateTrace(batch: UpdateBatch): void {
    if (batch.z !== undefined || batch.a !== undefined) {
      throw new Error("this session takes trace= batches only");
    }
    if (batch.trace === undefined) {
      throw new Error("update needs trace=");
    }
    const trace = batch.trace;
    if (!Array.isArray(trace) || trace.length === 0) {
      throw new Error("trace must be a 3-D array shaped samples x attributes x steps");
    }
    for (const sample of trace) {
      if (!Array.isArray(sample) || sample.length === 0 || !Array.isArray(sample[0])) {
        throw new Error("trace must be a 3-D array shaped samples x attributes x steps");
      }
      if (this.traceSamples.length > 0) {
        const attrs = this.traceSamples[0]!.length;
        const steps = this.traceSamples[0]![0]!.length;
        if (sample.length !== attrs || sample[0]!.length !== steps) {
          throw new Error(
            `trace shape changed: buffered A x K = ${attrs} x ${steps}, ` +
            `got ${sample.length} x ${sample[0]!.length}`
          );
        }
      }
      this.traceSamples.push(sample.map((row) => row.slice()));
    }
  }

  /** Run the core on everything buffered so far; non-destructive. */
  compute(): ReportDocument {
    if (this.wantsTrace) {
      return this.computeTrace();
    }
    return this.computeRows();
  }

  private computeRows(): ReportDocument {
    if (this.zRows.length === 0) {
      throw new Error("compute on an empty session: no batches buffered");
    }
    const spec = this.spec as { metric?: DisentMetricId; bundle?: string; options?: DisentOptions };
    const flags = disentFlags(spec.options ?? {});
    const head =
      spec.bundle !== undefined
        ? ["bundle", "--bundle", spec.bundle]
        : ["disent", "--metrics", spec.metric!];
    const stdout = invokeCliWithMatrices({ z: this.zRows, a: this.aRows }, (paths) => [
      ...head,
      "--latents", paths.z!,
      "--attributes", paths.a!,
      ...flags,
    ]);
    return parseReport(stdout);
  }

  private computeTrace(): ReportDocument {
    if (this.traceSamples.length === 0) {
      throw new Error("compute on an empty session: no batches buffered");
    }
    const spec = this.spec as {
      metric: InterpMetricId;
      delta: number;
      epsilon?: number;
      options?: EstimatorOptions;
    };
    const rows: number[][] = [];
    for (const sample of this.traceSamples) {
      for (const row of sample) rows.push(row);
    }
    const flags = [
      "--samples", String(this.traceSamples.length),
      "--attributes", String(this.traceSamples[0]!.length),
      "--delta", String(spec.delta),
      "--metrics", spec.metric,
    ];
    if (spec.epsilon !== undefined) {
      flags.push("--epsilon", String(spec.epsilon));
    }
    flags.push(...commonFlags(spec.options ?? {}));
    const stdout = invokeCliWithMatrices({ trace: rows }, (paths) => [
      "interp",
      "--trace", paths.trace!,
      ...flags,
    ]);
    return parseReport(stdout);
  }
}

/** New empty session for the given spec. */
export function createSession(spec: SessionSpec): MetricSession {
  return new MetricSession(spec);
}
