"""Estimator configuration shared by every metric in the package."""

from __future__ import annotations

from dataclasses import dataclass

DISCRETE = "discrete"
CONTINUOUS = "continuous"
VALID_KINDS = (DISCRETE, CONTINUOUS)

#: Metric denominators below this value (in nats) are reported as errors
#: instead of producing huge or negative scores.
DENOMINATOR_FLOOR = 1e-9


@dataclass(frozen=True)
class EstimatorConfig:
    """Settings for the information estimators.

    All information quantities are computed in nats (natural log).

    Attributes:
        seed: Base seed for the deterministic tie-breaking jitter.  With the
            default of 42 every estimate is bit-reproducible.  ``None`` draws
            fresh entropy on each call, making continuous estimates
            nondeterministic.
        k_neighbors: Neighbor count for the kNN estimators (continuous and
            mixed mutual information, differential entropy).  Must be smaller
            than the sample count of any batch it is applied to.
        jitter_scale: Relative amplitude of the tie-breaking noise added to
            continuous columns, in units of the column standard deviation.
    """

    seed: int | None = 42
    k_neighbors: int = 3
    jitter_scale: float = 1e-10

    def __post_init__(self):
        if self.seed is not None and (not isinstance(self.seed, int) or self.seed < 0):
            raise ValueError(f"seed must be a nonnegative integer or None, got {self.seed!r}")
        if not isinstance(self.k_neighbors, int) or self.k_neighbors < 1:
            raise ValueError(f"k_neighbors must be a positive integer, got {self.k_neighbors!r}")
        if self.jitter_scale < 0:
            raise ValueError(f"jitter_scale must be nonnegative, got {self.jitter_scale!r}")


def normalize_kind(kind: str) -> str:
    if kind not in VALID_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {VALID_KINDS}")
    return kind
