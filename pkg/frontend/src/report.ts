/**
 * Report document types mirroring the core's JSON schema, plus a parser.
 *
 * JSON numbers are IEEE doubles and the core emits 17 significant digits,
 * so `JSON.parse` reconstructs every value bit-exactly; no custom number
 * handling is needed on this side.
 */

export interface ReportConfig {
  seed: number | null;
  k_neighbors: number;
  reg_dim: number[] | null;
  delta: number | null;
  epsilon: number | null;
  metrics: string[];
}

export interface ReportEntry {
  metric: string;
  targets: string[];
  values: (number | null)[];
  errors: (string | null)[];
  warnings: string[];
  aggregate: number | null;
  /** Per-(sample, attribute) matrix; present for interpolatability metrics. */
  cells?: (number | null)[][];
}

export interface ReportDocument {
  schema_version: number;
  config: ReportConfig;
  results: ReportEntry[];
}

function fail(what: string): never {
  throw new Error(`malformed report from the core CLI: ${what}`);
}

/** Parse core CLI stdout into a typed document, checking the shape. */
export function parseReport(text: string): ReportDocument {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    fail("not valid JSON");
  }
  if (typeof raw !== "object" || raw === null) fail("not a JSON object");
  const document = raw as Record<string, unknown>;
  if (document.schema_version !== 1) fail(`schema_version ${document.schema_version}`);
  if (typeof document.config !== "object" || document.config === null) fail("missing config");
  if (!Array.isArray(document.results)) fail("missing results");
  for (const item of document.results) {
    const entry = item as Record<string, unknown>;
    if (typeof entry.metric !== "string") fail("result without a metric id");
    for (const key of ["targets", "values", "errors", "warnings"]) {
      if (!Array.isArray(entry[key])) fail(`result ${entry.metric} missing ${key}`);
    }
  }
  return document as unknown as ReportDocument;
}
