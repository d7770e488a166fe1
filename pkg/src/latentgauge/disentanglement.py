"""Gap-style disentanglement metrics over a latent batch and its attributes.

Six metrics share the same skeleton: rank the latent dimensions by how much
they tell you about each attribute (mutual information, or a predictability
score for SAP), take the gap between the two top-ranked candidates, and
normalize.  They differ in which candidates compete and in the normalizer:

* ``mig``        per attribute, all dimensions compete, normalized by H(a_i)
* ``sap``        per attribute, predictability scores, unnormalized gap
* ``modularity`` per dimension, penalizes information spread over attributes
* ``dmig``       MIG with the normalizer H(a_i | a_l) where a_l is the
                 attribute regularized by the runner-up dimension
* ``xmig``       MIG whose subtrahend is restricted to unregularized
                 ("blind") dimensions
* ``dlig``       per regularized dimension, gap over attributes, normalized
                 by H(a_j | a_k)

Every argmax breaks ties toward the lowest index.  Degenerate normalizers
(below ``DENOMINATOR_FLOOR`` nats) produce a per-target error entry rather
than an exception or a silent NaN, so one bad attribute cannot take down a
whole report.  Aggregates average the defined targets only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batches import AttributeBatch, LatentBatch, RegularizationMap
from .config import DENOMINATOR_FLOOR, EstimatorConfig
from .estimators import conditional_entropy, entropy, mi_matrix, predictability_score

__all__ = [
    "DisentanglementResult",
    "MetricContext",
    "mig",
    "sap",
    "modularity",
    "dmig",
    "xmig",
    "dlig",
]


@dataclass(frozen=True)
class DisentanglementResult:
    """Per-target values of one metric plus their mean.

    ``per_target[t]`` is None exactly where ``errors[t]`` carries a message;
    ``aggregate`` is the arithmetic mean of the defined targets, or None if
    every target errored.
    """

    metric_id: str
    targets: tuple[str, ...]
    per_target: tuple[float | None, ...]
    errors: tuple[str | None, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not (len(self.targets) == len(self.per_target) == len(self.errors)):
            raise ValueError("targets, per_target and errors must have equal lengths")
        for value, err in zip(self.per_target, self.errors):
            if (value is None) == (err is None):
                raise ValueError("each target needs exactly one of value or error")

    @property
    def aggregate(self) -> float | None:
        defined = [v for v in self.per_target if v is not None]
        if not defined:
            return None
        return float(np.mean(defined))


class MetricContext:
    """Shared precomputation for one (latents, attributes, config) triple.

    Bundles compute several metrics from the same data; the MI matrix,
    attribute entropies and conditional entropies are cached here so they
    are estimated once.  Caching never changes values: every entry is the
    deterministic output of the corresponding estimator call.
    """

    def __init__(self, z, a, cfg: EstimatorConfig | None = None, *, discrete=False):
        self.zb = LatentBatch.coerce(z)
        self.ab = a if isinstance(a, AttributeBatch) else AttributeBatch.coerce(a, discrete)
        if self.zb.n_samples != self.ab.n_samples:
            raise ValueError(
                f"latents have {self.zb.n_samples} rows but attributes have {self.ab.n_samples}"
            )
        self.cfg = cfg or EstimatorConfig()
        self._matrix: np.ndarray | None = None
        self._entropies: dict[int, float] = {}
        self._cond: dict[tuple[int, int], float] = {}

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = mi_matrix(self.zb, self.ab, self.cfg)
        return self._matrix

    def attr_entropy(self, i: int) -> float:
        if i not in self._entropies:
            self._entropies[i] = entropy(self.ab.values[:, i], self.ab.kinds[i], self.cfg)
        return self._entropies[i]

    def attr_conditional_entropy(self, i: int, l: int) -> float:
        if (i, l) not in self._cond:
            self._cond[(i, l)] = conditional_entropy(
                self.ab.values[:, i], self.ab.kinds[i],
                self.ab.values[:, l], self.ab.kinds[l], self.cfg,
            )
        return self._cond[(i, l)]

    def coerce_reg(self, reg) -> RegularizationMap:
        return RegularizationMap.coerce(reg, self.ab.n_attrs, self.zb.n_dims)


def _require_dims(ctx: MetricContext, metric_id: str) -> None:
    if ctx.zb.n_dims < 2:
        raise ValueError(f"{metric_id} needs at least 2 latent dimensions, got {ctx.zb.n_dims}")


def _top_two(row: np.ndarray) -> tuple[int, int]:
    # np.argmax returns the first maximum, i.e. the lowest tied index
    j = int(np.argmax(row))
    rest = row.copy()
    rest[j] = -np.inf
    return j, int(np.argmax(rest))


def _entropy_floor_error(i: int, h: float) -> str:
    return (
        f"attribute {i} entropy {h:.6g} nats is at or below the "
        f"{DENOMINATOR_FLOOR:g} normalization floor"
    )


def _cond_floor_error(i: int, l: int, h: float) -> str:
    return (
        f"conditional entropy H(a{i}|a{l}) = {h:.6g} nats is at or below the "
        f"{DENOMINATOR_FLOOR:g} normalization floor"
    )


def _attr_targets(ctx: MetricContext) -> tuple[str, ...]:
    return tuple(f"a{i}" for i in range(ctx.ab.n_attrs))


def compute_mig(ctx: MetricContext) -> DisentanglementResult:
    _require_dims(ctx, "mig")
    m = ctx.matrix
    values: list[float | None] = []
    errors: list[str | None] = []
    for i in range(ctx.ab.n_attrs):
        j, k = _top_two(m[i])
        h = ctx.attr_entropy(i)
        if h <= DENOMINATOR_FLOOR:
            values.append(None)
            errors.append(_entropy_floor_error(i, h))
        else:
            values.append((m[i, j] - m[i, k]) / h)
            errors.append(None)
    return DisentanglementResult("mig", _attr_targets(ctx), tuple(values), tuple(errors))


def compute_sap(ctx: MetricContext) -> DisentanglementResult:
    _require_dims(ctx, "sap")
    values: list[float | None] = []
    for i in range(ctx.ab.n_attrs):
        scores = np.array([
            predictability_score(ctx.zb.values[:, d], ctx.ab.values[:, i], ctx.ab.kinds[i], ctx.cfg)
            for d in range(ctx.zb.n_dims)
        ])
        j, k = _top_two(scores)
        values.append(float(scores[j] - scores[k]))
    return DisentanglementResult(
        "sap", _attr_targets(ctx), tuple(values), (None,) * ctx.ab.n_attrs
    )


def compute_modularity(ctx: MetricContext) -> DisentanglementResult:
    if ctx.ab.n_attrs < 2:
        raise ValueError(f"modularity needs at least 2 attributes, got {ctx.ab.n_attrs}")
    m = ctx.matrix
    n_attrs, n_dims = m.shape
    values: list[float | None] = []
    warnings: list[str] = []
    for d in range(n_dims):
        col = m[:, d]
        j = int(np.argmax(col))
        top = col[j]
        if top == 0.0:
            # an uninformative dimension trivially carries information
            # about at most one attribute
            values.append(1.0)
            warnings.append(
                f"latent dimension {d} has zero mutual information with every "
                f"attribute; modularity defined as 1.0"
            )
            continue
        ratios = col / top
        spread = sum((float(ratios[i]) ** 2 for i in range(n_attrs) if i != j))
        values.append(1.0 - spread / (n_attrs - 1))
    targets = tuple(f"z{d}" for d in range(n_dims))
    return DisentanglementResult(
        "modularity", targets, tuple(values), (None,) * n_dims, tuple(warnings)
    )


def compute_dmig(ctx: MetricContext, reg: RegularizationMap) -> DisentanglementResult:
    _require_dims(ctx, "dmig")
    m = ctx.matrix
    values: list[float | None] = []
    errors: list[str | None] = []
    for i in range(ctx.ab.n_attrs):
        j, k = _top_two(m[i])
        l = reg.attribute_for_dim(k)
        if l is None:
            # runner-up regularizes nothing: the metric reduces to plain MIG
            h = ctx.attr_entropy(i)
            floor_msg = _entropy_floor_error(i, h)
        else:
            h = ctx.attr_conditional_entropy(i, l)
            floor_msg = _cond_floor_error(i, l, h)
        if h <= DENOMINATOR_FLOOR:
            values.append(None)
            errors.append(floor_msg)
        else:
            values.append((m[i, j] - m[i, k]) / h)
            errors.append(None)
    return DisentanglementResult("dmig", _attr_targets(ctx), tuple(values), tuple(errors))


def compute_xmig(ctx: MetricContext, reg: RegularizationMap) -> DisentanglementResult:
    _require_dims(ctx, "xmig")
    blind = reg.blind_dims
    if not blind:
        raise ValueError("xmig is undefined: every latent dimension regularizes an attribute")
    m = ctx.matrix
    values: list[float | None] = []
    errors: list[str | None] = []
    for i in range(ctx.ab.n_attrs):
        j = int(np.argmax(m[i]))
        candidates = [d for d in blind if d != j]
        if not candidates:
            values.append(None)
            errors.append(
                f"attribute {i}: the only unregularized dimension {j} is also the "
                f"most informative one; no blind subtrahend exists"
            )
            continue
        sub = m[i, candidates]
        k = candidates[int(np.argmax(sub))]
        h = ctx.attr_entropy(i)
        if h <= DENOMINATOR_FLOOR:
            values.append(None)
            errors.append(_entropy_floor_error(i, h))
        else:
            values.append((m[i, j] - m[i, k]) / h)
            errors.append(None)
    return DisentanglementResult("xmig", _attr_targets(ctx), tuple(values), tuple(errors))


def compute_dlig(ctx: MetricContext, reg: RegularizationMap) -> DisentanglementResult:
    if ctx.ab.n_attrs < 2:
        raise ValueError(f"dlig needs at least 2 attributes, got {ctx.ab.n_attrs}")
    m = ctx.matrix
    values: list[float | None] = []
    errors: list[str | None] = []
    for d in reg.reg_dim:
        col = m[:, d]
        j, k = _top_two(col)
        h = ctx.attr_conditional_entropy(j, k)
        if h <= DENOMINATOR_FLOOR:
            values.append(None)
            errors.append(_cond_floor_error(j, k, h))
        else:
            values.append((col[j] - col[k]) / h)
            errors.append(None)
    targets = tuple(f"z{d}" for d in reg.reg_dim)
    return DisentanglementResult("dlig", targets, tuple(values), tuple(errors))


def mig(z, a, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Mutual information gap, one value per attribute.

    Gap between the two latent dimensions most informative about the
    attribute, normalized by the attribute entropy.
    """
    return compute_mig(MetricContext(z, a, cfg, discrete=discrete))


def sap(z, a, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Separated attribute predictability, one value per attribute.

    Gap between the two best per-dimension predictability scores (R^2 for
    continuous attributes, balanced threshold accuracy for discrete ones).
    """
    return compute_sap(MetricContext(z, a, cfg, discrete=discrete))


def modularity(z, a, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Modularity, one value per latent dimension.

    1 minus the mean squared MI ratio of the non-dominant attributes, so a
    dimension informative about exactly one attribute scores 1.
    """
    return compute_modularity(MetricContext(z, a, cfg, discrete=discrete))


def dmig(z, a, reg=None, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Dependency-aware MIG, one value per attribute.

    Like ``mig`` but normalized by H(a_i | a_l) where a_l is the attribute
    regularized by the runner-up dimension; when the runner-up regularizes
    no attribute this reduces to plain MIG.  ``reg=None`` means attribute i
    is regularized by dimension i.
    """
    ctx = MetricContext(z, a, cfg, discrete=discrete)
    return compute_dmig(ctx, ctx.coerce_reg(reg))


def xmig(z, a, reg=None, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Exclusive MIG, one value per attribute.

    Gap between the globally most informative dimension and the best
    unregularized ("blind") dimension, normalized by attribute entropy.
    Requires at least one unregularized dimension.
    """
    ctx = MetricContext(z, a, cfg, discrete=discrete)
    return compute_xmig(ctx, ctx.coerce_reg(reg))


def dlig(z, a, reg=None, cfg: EstimatorConfig | None = None, *, discrete=False) -> DisentanglementResult:
    """Dependency-aware latent information gap, one value per regularized dimension.

    For each regularized dimension, the gap between the two attributes it is
    most informative about, normalized by H(a_j | a_k).
    """
    ctx = MetricContext(z, a, cfg, discrete=discrete)
    return compute_dlig(ctx, ctx.coerce_reg(reg))
