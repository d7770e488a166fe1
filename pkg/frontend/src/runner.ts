/**
 * Process plumbing: spawn the core CLI, hand back stdout, translate
 * failures into exceptions carrying the core's own diagnostic text.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { encodeNpyMatrix, type Matrix } from "./npy.js";

/** CLI failure with the core's stderr diagnostic as the message. */
export class CoreCliError extends Error {
  constructor(
    message: string,
    /** 1 for validation problems, 2 for I/O and format problems. */
    readonly exitCode: number
  ) {
    super(message);
    this.name = "CoreCliError";
  }
}

function cliCommand(): string {
  return process.env.LATENTGAUGE_CLI ?? "latentgauge";
}

/** Run the core CLI once and return its stdout. */
export function invokeCli(args: string[]): string {
  const command = cliCommand();
  const result = spawnSync(command, args, {
    encoding: "utf8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (result.error !== undefined) {
    const cause = result.error as NodeJS.ErrnoException;
    if (cause.code === "ENOENT") {
      throw new Error(
        `core CLI '${command}' not found; install the Python package or point LATENTGAUGE_CLI at it`
      );
    }
    throw result.error;
  }
  if (result.status !== 0) {
    const diagnostic = result.stderr.trim() || `core CLI exited with status ${result.status}`;
    throw new CoreCliError(diagnostic, result.status ?? -1);
  }
  return result.stdout;
}

/**
 * Materialize matrices as NPY files in a fresh temp directory, run the
 * CLI, and clean up afterwards regardless of the outcome.
 */
export function invokeCliWithMatrices(
  matrices: Record<string, Matrix>,
  argsFor: (paths: Record<string, string>) => string[]
): string {
  const dir = mkdtempSync(join(tmpdir(), "latentgauge-"));
  try {
    const paths: Record<string, string> = {};
    for (const [name, matrix] of Object.entries(matrices)) {
      const filePath = join(dir, `${name}.npy`);
      writeFileSync(filePath, encodeNpyMatrix(matrix));
      paths[name] = filePath;
    }
    return invokeCli(argsFor(paths));
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
