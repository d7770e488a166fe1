"""Command-line interface: file-based metric runs emitting JSON reports.

Three subcommands cover the two metric families and the built-in bundle:

    latentgauge disent --latents z.csv --attributes a.csv --metrics mig,dmig
    latentgauge interp --trace t.npy --samples 8 --attributes 2 --delta 0.1
    latentgauge bundle --bundle dami --latents z.npy --attributes a.npy

Exit codes: 0 on success, 1 for validation problems (bad flags, unknown
metrics, mismatched shapes), 2 for I/O problems (unreadable or malformed
input files).  Reports go to stdout or to --output and are byte-identical
across runs for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import sys

from .batches import AttributeBatch, InterpolationTrace, LatentBatch, RegularizationMap, normalize_kinds
from .config import EstimatorConfig
from .disentanglement import (
    MetricContext,
    compute_dlig,
    compute_dmig,
    compute_mig,
    compute_modularity,
    compute_sap,
)
from .interpolatability import monotonicity_result, smoothness_result
from .report import build_report, to_json
from .session import (
    DISENTANGLEMENT_METRICS,
    INTERPOLATABILITY_METRICS,
    MetricReport,
    _NEEDS_REG,
    xmig_report_result,
)
from .tableio import TableFormatError, load_table

__all__ = ["main", "run_cli"]

_BUNDLES = {"dami": ("mig", "dmig", "xmig", "dlig")}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this CLI reserves 2 for I/O
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(ValueError):
    pass


def _parse_seed(text: str):
    if text.lower() == "none":
        return None
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"--seed must be an integer or 'none', got {text!r}") from None


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise ValueError(f"expected 'true' or 'false', got {text!r}")


def _parse_discrete(text: str):
    parts = text.split(",")
    if len(parts) == 1:
        return _parse_bool(parts[0])
    return tuple(_parse_bool(p) for p in parts)


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in text.split(","))
    except ValueError:
        raise ValueError(f"{flag} must be a comma-separated list of integers, got {text!r}") from None


def _parse_metrics(text: str, valid: tuple[str, ...]) -> tuple[str, ...]:
    names = tuple(p.strip() for p in text.split(","))
    for name in names:
        if name not in valid:
            raise ValueError(f"unknown metric {name!r}; valid metrics: {', '.join(valid)}")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate metric names in {text!r}")
    return names


def _build_parser() -> _Parser:
    parser = _Parser(prog="latentgauge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--seed", default="42", help="estimator seed, an integer or 'none'")
        p.add_argument("--k-neighbors", type=int, default=3, help="kNN estimator neighbor count")
        p.add_argument("--output", default="-", help="report path, '-' for stdout")

    disent = sub.add_parser("disent", help="disentanglement metrics from latents + attributes")
    disent.add_argument("--latents", required=True, help="csv or npy latent matrix, N x D")
    disent.add_argument("--attributes", required=True, help="csv or npy attribute matrix, N x A")
    disent.add_argument("--metrics", required=True, help="comma list of metrics")
    disent.add_argument("--reg-dim", default=None, help="comma list: latent dim regularizing each attribute")
    disent.add_argument("--discrete", default="false", help="'true'/'false' or a per-attribute comma list")
    common(disent)

    interp = sub.add_parser("interp", help="interpolatability metrics from a trace matrix")
    interp.add_argument("--trace", required=True, help="csv or npy trace matrix, (S*A) x K sample-major")
    interp.add_argument("--samples", type=int, required=True, help="number of interpolation start samples S")
    interp.add_argument("--attributes", type=int, required=True, help="number of attributes A")
    interp.add_argument("--delta", type=float, required=True, help="latent step between grid points")
    interp.add_argument("--epsilon", type=float, default=0.0, help="noise threshold for monotonicity")
    interp.add_argument("--metrics", default="smoothness,monotonicity", help="comma list of metrics")
    common(interp)

    bundle = sub.add_parser("bundle", help="run a named metric bundle")
    bundle.add_argument("--bundle", required=True, help="bundle name (dami)")
    bundle.add_argument("--latents", required=True, help="csv or npy latent matrix, N x D")
    bundle.add_argument("--attributes", required=True, help="csv or npy attribute matrix, N x A")
    bundle.add_argument("--reg-dim", default=None, help="comma list: latent dim regularizing each attribute")
    bundle.add_argument("--discrete", default="false", help="'true'/'false' or a per-attribute comma list")
    common(bundle)
    return parser


_COMPUTE = {
    "mig": lambda ctx, reg: compute_mig(ctx),
    "sap": lambda ctx, reg: compute_sap(ctx),
    "modularity": lambda ctx, reg: compute_modularity(ctx),
    "dmig": compute_dmig,
    "xmig": xmig_report_result,
    "dlig": compute_dlig,
}


def _run_disent(args, metrics: tuple[str, ...]) -> str:
    seed = _parse_seed(args.seed)
    cfg = EstimatorConfig(seed=seed, k_neighbors=args.k_neighbors)
    z_table = load_table(args.latents)
    a_table = load_table(args.attributes)
    if z_table.n_rows != a_table.n_rows:
        raise ValueError(
            f"latents have {z_table.n_rows} rows but attributes have {a_table.n_rows}"
        )
    kinds = normalize_kinds(_parse_discrete(args.discrete), a_table.n_cols)
    zb = LatentBatch(z_table.values)
    ab = AttributeBatch(a_table.values, kinds)
    reg_dims = None if args.reg_dim is None else _parse_int_list(args.reg_dim, "--reg-dim")
    reg = None
    if reg_dims is not None or any(m in _NEEDS_REG for m in metrics):
        reg = RegularizationMap.coerce(reg_dims, ab.n_attrs, zb.n_dims)
    ctx = MetricContext(zb, ab, cfg)
    results = [_COMPUTE[metric_id](ctx, reg) for metric_id in metrics]
    doc = build_report(
        MetricReport(tuple(results)),
        seed=seed, k_neighbors=cfg.k_neighbors,
        reg_dim=None if reg is None else reg.reg_dim,
    )
    return to_json(doc)


def _run_interp(args) -> str:
    metrics = _parse_metrics(args.metrics, INTERPOLATABILITY_METRICS)
    seed = _parse_seed(args.seed)
    cfg = EstimatorConfig(seed=seed, k_neighbors=args.k_neighbors)
    table = load_table(args.trace)
    s, a = args.samples, args.attributes
    if s < 1 or a < 1:
        raise ValueError("--samples and --attributes must be positive")
    if table.n_rows != s * a:
        raise ValueError(
            f"trace has {table.n_rows} rows but --samples {s} x --attributes {a} "
            f"needs {s * a}"
        )
    measurements = table.values.reshape(s, a, table.n_cols)
    trace = InterpolationTrace(measurements, args.delta, args.epsilon)
    results = []
    for metric_id in metrics:
        if metric_id == "smoothness":
            results.append(smoothness_result(trace))
        else:
            results.append(monotonicity_result(trace))
    doc = build_report(
        MetricReport(tuple(results)),
        seed=seed, k_neighbors=cfg.k_neighbors, delta=trace.delta, epsilon=trace.epsilon,
    )
    return to_json(doc)


def run_cli(argv=None) -> int:
    """Parse arguments, run the requested computation, write the report."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "disent":
            text = _run_disent(args, _parse_metrics(args.metrics, DISENTANGLEMENT_METRICS))
        elif args.command == "interp":
            text = _run_interp(args)
        else:
            bundle_metrics = _BUNDLES.get(args.bundle)
            if bundle_metrics is None:
                raise ValueError(
                    f"unknown bundle {args.bundle!r}; valid bundles: {', '.join(_BUNDLES)}"
                )
            text = _run_disent(args, bundle_metrics)
    except TableFormatError as exc:
        print(f"latentgauge: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"latentgauge: {exc}", file=sys.stderr)
        return 2
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"latentgauge: {exc}", file=sys.stderr)
        return 1
    payload = text + "\n"
    if args.output == "-":
        sys.stdout.write(payload)
    else:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(payload)
        except OSError as exc:
            print(f"latentgauge: {exc}", file=sys.stderr)
            return 2
    return 0


def main() -> int:
    return run_cli()
