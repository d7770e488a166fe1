"""Streaming update/compute sessions and metric bundles.

A session buffers raw rows and runs the metric math only at compute time, so
any partition of a dataset into update batches is bit-identical to a single
shot over the concatenation (the kNN estimators have no exact streaming
form, which rules out incremental sufficient statistics).  Compute is
non-destructive: it can be called repeatedly and interleaved with further
updates.

Bundles evaluate several disentanglement metrics that share one
regularization map and one estimator config; members reuse a single
mutual-information matrix.  The built-in bundle ``dami`` is
[mig, dmig, xmig, dlig].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .batches import AttributeBatch, InterpolationTrace, LatentBatch, RegularizationMap, normalize_kinds
from .config import DISCRETE, EstimatorConfig
from .disentanglement import (
    DisentanglementResult,
    MetricContext,
    compute_dlig,
    compute_dmig,
    compute_mig,
    compute_modularity,
    compute_sap,
    compute_xmig,
)
from .interpolatability import (
    InterpolatabilityResult,
    monotonicity_result,
    smoothness_result,
)

__all__ = [
    "DISENTANGLEMENT_METRICS",
    "INTERPOLATABILITY_METRICS",
    "VALID_METRICS",
    "MetricSpec",
    "BundleSpec",
    "dami_bundle",
    "MetricReport",
    "MetricSession",
    "create",
    "update",
    "compute",
]

DISENTANGLEMENT_METRICS = ("mig", "sap", "modularity", "dmig", "xmig", "dlig")
INTERPOLATABILITY_METRICS = ("smoothness", "monotonicity")
VALID_METRICS = DISENTANGLEMENT_METRICS + INTERPOLATABILITY_METRICS

_NEEDS_REG = ("dmig", "xmig", "dlig")

# buffering must fail loudly instead of thrashing
DEFAULT_MAX_BUFFERED_SCALARS = 10_000_000


def _check_metric_id(metric_id: str) -> str:
    if metric_id not in VALID_METRICS:
        raise ValueError(
            f"unknown metric {metric_id!r}; valid metrics: {', '.join(VALID_METRICS)}"
        )
    return metric_id


def xmig_report_result(ctx: MetricContext, reg: RegularizationMap) -> DisentanglementResult:
    """XMIG for a report: the no-blind-dims case becomes per-target errors.

    A report embeds compute problems instead of throwing, so a bundle on a
    fully covered regularization map still reports its other members; the
    standalone ``xmig()`` call raises for the same input.
    """
    if not reg.blind_dims:
        msg = "xmig is undefined: every latent dimension regularizes an attribute"
        targets = tuple(f"a{i}" for i in range(ctx.ab.n_attrs))
        return DisentanglementResult(
            "xmig", targets, (None,) * len(targets), (msg,) * len(targets)
        )
    return compute_xmig(ctx, reg)


def _coerce_spec_reg(reg):
    if reg is None or isinstance(reg, RegularizationMap):
        return reg
    dims = tuple(int(d) for d in reg)
    if len(set(dims)) != len(dims):
        raise ValueError(f"reg_dim entries must be pairwise distinct, got {dims}")
    for d in dims:
        if d < 0:
            raise ValueError(f"reg_dim entry {d} must be nonnegative")
    return dims


@dataclass(frozen=True)
class MetricSpec:
    """Everything needed to evaluate one metric, fixed at session creation.

    ``reg`` may be a RegularizationMap, a bare tuple of dimension indices
    (range-checked against the data at update time), or None.  The
    dependency-aware metrics require it.  Interpolatability metrics require
    ``delta``; ``epsilon`` defaults to 0.  ``discrete`` declares the
    attribute kinds exactly as AttributeBatch.coerce accepts them.
    """

    metric_id: str
    reg: object = None
    cfg: EstimatorConfig = field(default_factory=EstimatorConfig)
    discrete: object = False
    delta: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        _check_metric_id(self.metric_id)
        object.__setattr__(self, "reg", _coerce_spec_reg(self.reg))
        if not isinstance(self.cfg, EstimatorConfig):
            raise ValueError("cfg must be an EstimatorConfig")
        if self.metric_id in _NEEDS_REG and self.reg is None:
            raise ValueError(f"{self.metric_id} requires a regularization map")
        if self.metric_id in INTERPOLATABILITY_METRICS:
            if self.delta is None:
                raise ValueError(f"{self.metric_id} requires delta")
            if not self.delta > 0:
                raise ValueError(f"delta must be positive, got {self.delta}")
            if self.epsilon is not None and self.epsilon < 0:
                raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        else:
            if self.delta is not None or self.epsilon is not None:
                raise ValueError(f"{self.metric_id} takes no trace parameters")


@dataclass(frozen=True)
class BundleSpec:
    """An ordered list of disentanglement metrics sharing one (reg, cfg).

    Per-member overrides are deliberately impossible: members are derived
    from the bundle's single reg, cfg and discrete declaration.
    """

    bundle_id: str
    metric_ids: tuple[str, ...]
    reg: object = None
    cfg: EstimatorConfig = field(default_factory=EstimatorConfig)
    discrete: object = False

    def __post_init__(self):
        ids = tuple(self.metric_ids)
        object.__setattr__(self, "metric_ids", ids)
        if not ids:
            raise ValueError("a bundle needs at least one member metric")
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate metrics in bundle: {ids}")
        for metric_id in ids:
            _check_metric_id(metric_id)
            if metric_id in INTERPOLATABILITY_METRICS:
                raise ValueError(
                    f"{metric_id} cannot join a bundle; bundles share a "
                    f"mutual-information matrix over (latents, attributes)"
                )
        object.__setattr__(self, "reg", _coerce_spec_reg(self.reg))
        if not isinstance(self.cfg, EstimatorConfig):
            raise ValueError("cfg must be an EstimatorConfig")
        for metric_id in ids:
            if metric_id in _NEEDS_REG and self.reg is None:
                raise ValueError(f"bundle member {metric_id} requires a regularization map")

    @property
    def members(self) -> tuple[MetricSpec, ...]:
        return tuple(
            MetricSpec(metric_id, reg=self.reg, cfg=self.cfg, discrete=self.discrete)
            for metric_id in self.metric_ids
        )


def dami_bundle(reg, cfg: EstimatorConfig | None = None, *, discrete=False) -> BundleSpec:
    """The built-in dependency-aware mutual information bundle."""
    return BundleSpec(
        "dami", ("mig", "dmig", "xmig", "dlig"),
        reg=reg, cfg=cfg or EstimatorConfig(), discrete=discrete,
    )


@dataclass(frozen=True)
class MetricReport:
    """Ordered results of a compute call, keyed by metric id."""

    results: tuple[DisentanglementResult | InterpolatabilityResult, ...]

    def __post_init__(self):
        ids = [r.metric_id for r in self.results]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate metric ids in report: {ids}")

    @property
    def metric_ids(self) -> tuple[str, ...]:
        return tuple(r.metric_id for r in self.results)

    def __getitem__(self, metric_id: str):
        for r in self.results:
            if r.metric_id == metric_id:
                return r
        raise KeyError(metric_id)

    def __contains__(self, metric_id: str) -> bool:
        return metric_id in self.metric_ids


class MetricSession:
    """Single-writer accumulator for one MetricSpec or BundleSpec.

    ``update`` appends rows (or trace slabs) after validating them against
    what is already buffered; ``compute`` runs the metric math on the
    concatenation of everything buffered so far and leaves the buffer
    untouched.
    """

    def __init__(self, spec: MetricSpec | BundleSpec,
                 max_buffered_scalars: int = DEFAULT_MAX_BUFFERED_SCALARS):
        if not isinstance(spec, (MetricSpec, BundleSpec)):
            raise ValueError("spec must be a MetricSpec or a BundleSpec")
        if max_buffered_scalars < 1:
            raise ValueError("max_buffered_scalars must be positive")
        self.spec = spec
        self.max_buffered_scalars = int(max_buffered_scalars)
        self._z_parts: list[np.ndarray] = []
        self._a_parts: list[np.ndarray] = []
        self._trace_parts: list[np.ndarray] = []
        self._kinds: tuple[str, ...] | None = None
        self._buffered_scalars = 0

    # --- bookkeeping ---------------------------------------------------

    @property
    def row_count(self) -> int:
        if self._wants_trace:
            return sum(part.shape[0] for part in self._trace_parts)
        return sum(part.shape[0] for part in self._z_parts)

    @property
    def _wants_trace(self) -> bool:
        return (
            isinstance(self.spec, MetricSpec)
            and self.spec.metric_id in INTERPOLATABILITY_METRICS
        )

    def _metric_ids(self) -> tuple[str, ...]:
        if isinstance(self.spec, BundleSpec):
            return self.spec.metric_ids
        return (self.spec.metric_id,)

    def _reserve(self, n_scalars: int) -> None:
        if self._buffered_scalars + n_scalars > self.max_buffered_scalars:
            raise ValueError(
                f"buffer limit exceeded: {self._buffered_scalars + n_scalars} scalars "
                f"would be buffered, limit is {self.max_buffered_scalars}"
            )
        self._buffered_scalars += n_scalars

    # --- update --------------------------------------------------------

    def update(self, z=None, a=None, trace=None) -> "MetricSession":
        """Buffer one batch; returns self for chaining."""
        if self._wants_trace:
            if trace is None or z is not None or a is not None:
                raise ValueError(f"{self.spec.metric_id} updates take trace= only")
            self._update_trace(trace)
        else:
            if z is None or a is None or trace is not None:
                raise ValueError("disentanglement updates take z= and a=")
            self._update_rows(z, a)
        return self

    def _update_rows(self, z, a) -> None:
        zv = np.asarray(z, dtype=np.float64)
        if zv.ndim == 1:
            zv = zv.reshape(-1, 1)
        if zv.ndim != 2:
            raise ValueError(f"latents must be 2-D, got shape {zv.shape}")
        if isinstance(a, AttributeBatch):
            av, kinds = a.values, a.kinds
            expected = normalize_kinds(self.spec.discrete, av.shape[1])
            if kinds != expected:
                raise ValueError(
                    f"attribute kinds {kinds} conflict with the session's "
                    f"discrete declaration {expected}"
                )
        else:
            av = np.asarray(a, dtype=np.float64)
            if av.ndim == 1:
                av = av.reshape(-1, 1)
            if av.ndim != 2:
                raise ValueError(f"attributes must be 2-D, got shape {av.shape}")
            kinds = normalize_kinds(self.spec.discrete, av.shape[1])
        for i, kind in enumerate(kinds):
            if kind == DISCRETE and not np.array_equal(av[:, i], np.round(av[:, i])):
                raise ValueError(
                    f"attribute column {i} is discrete but holds non-integer values"
                )
        if not np.all(np.isfinite(zv)):
            raise ValueError("latents contain non-finite entries")
        if not np.all(np.isfinite(av)):
            raise ValueError("attributes contain non-finite entries")
        if zv.shape[0] != av.shape[0]:
            raise ValueError(
                f"latents have {zv.shape[0]} rows but attributes have {av.shape[0]}"
            )
        if zv.shape[0] == 0:
            raise ValueError("empty update batch")
        if self._z_parts:
            if zv.shape[1] != self._z_parts[0].shape[1]:
                raise ValueError(
                    f"latent width changed: buffered {self._z_parts[0].shape[1]}, "
                    f"got {zv.shape[1]}"
                )
            if av.shape[1] != self._a_parts[0].shape[1]:
                raise ValueError(
                    f"attribute width changed: buffered {self._a_parts[0].shape[1]}, "
                    f"got {av.shape[1]}"
                )
            if kinds != self._kinds:
                raise ValueError(f"attribute kinds changed: buffered {self._kinds}, got {kinds}")
        self._reserve(zv.size + av.size)
        self._z_parts.append(zv.copy())
        self._a_parts.append(av.copy())
        self._kinds = kinds

    def _update_trace(self, trace) -> None:
        if isinstance(trace, InterpolationTrace):
            if trace.delta != self.spec.delta:
                raise ValueError(
                    f"trace delta {trace.delta} differs from the session delta {self.spec.delta}"
                )
            tv = trace.measurements
        else:
            tv = np.asarray(trace, dtype=np.float64)
        if tv.ndim != 3:
            raise ValueError(f"trace slabs must be S x A x K, got shape {tv.shape}")
        if not np.all(np.isfinite(tv)):
            raise ValueError("trace contains non-finite entries")
        if tv.shape[0] == 0:
            raise ValueError("empty update batch")
        if self._trace_parts:
            if tv.shape[1:] != self._trace_parts[0].shape[1:]:
                raise ValueError(
                    f"trace shape changed: buffered A x K = {self._trace_parts[0].shape[1:]}, "
                    f"got {tv.shape[1:]}"
                )
        self._reserve(tv.size)
        self._trace_parts.append(tv.copy())

    # --- compute -------------------------------------------------------

    def compute(self) -> MetricReport:
        """Run every member metric on the buffered data; non-destructive."""
        if self._wants_trace:
            return self._compute_trace()
        return self._compute_rows()

    def _compute_rows(self) -> MetricReport:
        if not self._z_parts:
            raise ValueError("compute on an empty session: no batches buffered")
        z = np.concatenate(self._z_parts, axis=0)
        a = np.concatenate(self._a_parts, axis=0)
        spec = self.spec
        ctx = MetricContext(LatentBatch(z), AttributeBatch(a, self._kinds), spec.cfg)
        results = []
        for metric_id in self._metric_ids():
            if metric_id in _NEEDS_REG:
                reg = ctx.coerce_reg(spec.reg)
            if metric_id == "mig":
                results.append(compute_mig(ctx))
            elif metric_id == "sap":
                results.append(compute_sap(ctx))
            elif metric_id == "modularity":
                results.append(compute_modularity(ctx))
            elif metric_id == "dmig":
                results.append(compute_dmig(ctx, reg))
            elif metric_id == "xmig":
                results.append(xmig_report_result(ctx, reg))
            elif metric_id == "dlig":
                results.append(compute_dlig(ctx, reg))
        return MetricReport(tuple(results))

    def _compute_trace(self) -> MetricReport:
        if not self._trace_parts:
            raise ValueError("compute on an empty session: no batches buffered")
        measurements = np.concatenate(self._trace_parts, axis=0)
        epsilon = 0.0 if self.spec.epsilon is None else self.spec.epsilon
        trace = InterpolationTrace(measurements, self.spec.delta, epsilon)
        if self.spec.metric_id == "smoothness":
            return MetricReport((smoothness_result(trace),))
        return MetricReport((monotonicity_result(trace),))


def create(spec: MetricSpec | BundleSpec, **kwargs) -> MetricSession:
    """New empty session; all spec validation happens here."""
    return MetricSession(spec, **kwargs)


def update(state: MetricSession, z=None, a=None, trace=None) -> MetricSession:
    return state.update(z=z, a=a, trace=trace)


def compute(state: MetricSession) -> MetricReport:
    return state.compute()
