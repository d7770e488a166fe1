/** CLI flag construction shared by the functional API and sessions. */

export interface EstimatorOptions {
  /** Estimator seed; null disables jitter. Core default: 42. */
  seed?: number | null;
  /** kNN neighbor count for the continuous estimators. Core default: 3. */
  kNeighbors?: number;
}

export interface DisentOptions extends EstimatorOptions {
  /** One flag for all attributes or a per-attribute list. Default: false. */
  discrete?: boolean | ReadonlyArray<boolean>;
  /** Latent dimension regularizing each attribute, in attribute order. */
  regDim?: ReadonlyArray<number>;
}

export function commonFlags(options: EstimatorOptions): string[] {
  const flags: string[] = [];
  if (options.seed !== undefined) {
    flags.push("--seed", options.seed === null ? "none" : String(options.seed));
  }
  if (options.kNeighbors !== undefined) {
    flags.push("--k-neighbors", String(options.kNeighbors));
  }
  return flags;
}

export function discreteFlag(discrete: boolean | ReadonlyArray<boolean> | undefined): string {
  if (discrete === undefined) return "false";
  if (typeof discrete === "boolean") return String(discrete);
  if (discrete.length === 0) throw new Error("discrete list must not be empty");
  return discrete.map(String).join(",");
}

export function disentFlags(options: DisentOptions): string[] {
  const flags = ["--discrete", discreteFlag(options.discrete)];
  if (options.regDim !== undefined) {
    flags.push("--reg-dim", options.regDim.map(String).join(","));
  }
  return flags.concat(commonFlags(options));
}
