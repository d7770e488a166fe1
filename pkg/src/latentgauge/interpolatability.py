"""Interpolatability metrics over attribute measurements on latent grids.

An :class:`~latentgauge.batches.InterpolationTrace` holds, for each starting
sample and each attribute, the attribute values measured at K equally spaced
points along the latent direction that regularizes the attribute.  From the
forward differences of those measurements (the pseudo-derivatives, step
``delta``) two per-(sample, attribute) scores are computed:

* smoothness: 1 minus the contraharmonic mean of the absolute second-order
  differences over the scaled range of the first-order differences.  1 means
  the response is affine, 0 means maximal jaggedness.
* monotonicity: the average sign of the first-order differences, counting
  only steps whose magnitude exceeds the noise threshold ``epsilon``.  +1 is
  strictly increasing, -1 strictly decreasing; a trace with no significant
  step has no defined sign and yields the NaN sentinel (serialized as null
  and excluded from aggregates).

Sums along the grid axis run over sorted terms, so reversing the grid leaves
smoothness bit-identical and exactly negates monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batches import InterpolationTrace

__all__ = [
    "InterpolatabilityResult",
    "liad",
    "contraharmonic_mean",
    "smoothness",
    "monotonicity",
    "smoothness_result",
    "monotonicity_result",
]


def liad(trace: InterpolationTrace, order: int) -> np.ndarray:
    """Forward-difference pseudo-derivatives of the measured attributes.

    Args:
        trace: measurements on the interpolation grid.
        order: 1 or 2.

    Returns:
        S x A x (K - order) tensor; order 1 is (m[k+1] - m[k]) / delta, order
        2 is the same difference applied again to the order-1 values.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if trace.n_points <= order:
        raise ValueError(
            f"need more than {order} grid points for order-{order} differences, "
            f"got {trace.n_points}"
        )
    d1 = np.diff(trace.measurements, axis=2) / trace.delta
    if order == 1:
        return d1
    return np.diff(d1, axis=2) / trace.delta


def contraharmonic_mean(xs) -> float:
    """Sum of squares over sum, for a nonempty nonnegative vector.

    The all-zero input is defined as 0 so that a perfectly flat difference
    profile reads as "no curvature".
    """
    arr = np.asarray(xs, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError("contraharmonic mean of an empty vector is undefined")
    if not np.all(np.isfinite(arr)):
        raise ValueError("contraharmonic mean requires finite entries")
    if np.any(arr < 0):
        raise ValueError("contraharmonic mean requires nonnegative entries")
    total = float(np.sort(arr).sum())
    if total == 0.0:
        return 0.0
    return float(np.sort(arr * arr).sum()) / total


def smoothness(trace: InterpolationTrace) -> np.ndarray:
    """Per-(sample, attribute) smoothness scores in [0, 1].

    Needs K >= 4 so that the second-order differences have at least two
    entries to average and the first-order differences a nontrivial range.
    A zero first-order range (flat or affine response) scores 1.0.
    """
    if trace.n_points < 4:
        raise ValueError(f"smoothness needs at least 4 grid points, got {trace.n_points}")
    d1 = liad(trace, 1)
    d2 = np.abs(liad(trace, 2))
    d2_sorted = np.sort(d2, axis=2)
    total = d2_sorted.sum(axis=2)
    square = np.sort(d2_sorted * d2_sorted, axis=2).sum(axis=2)
    chm = np.divide(square, total, out=np.zeros_like(total), where=total > 0)
    spread = (d1.max(axis=2) - d1.min(axis=2)) / trace.delta
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.divide(chm, spread, out=np.zeros_like(chm), where=spread > 0)
    out = np.where(spread > 0, 1.0 - ratio, 1.0)
    return np.clip(out, 0.0, 1.0)


def monotonicity(trace: InterpolationTrace) -> np.ndarray:
    """Per-(sample, attribute) monotonicity scores in [-1, 1], NaN if undefined.

    Counts the signs of first-order differences whose magnitude exceeds the
    trace's epsilon; NaN marks cells where no step is significant.
    """
    d1 = liad(trace, 1)
    significant = np.abs(d1) > trace.epsilon
    signs = np.sign(d1).astype(np.int64)
    num = np.where(significant, signs, 0).sum(axis=2)
    den = significant.sum(axis=2)
    out = np.full(den.shape, np.nan)
    np.divide(num, den, out=out, where=den > 0)
    return out


@dataclass(frozen=True)
class InterpolatabilityResult:
    """Per-cell scores of one interpolatability metric plus reductions.

    ``cells`` is the S x A score matrix with NaN marking undefined entries.
    ``per_target`` averages the defined cells of each attribute (None when an
    attribute has no defined cell); ``aggregate`` averages all defined cells.
    """

    metric_id: str
    cells: np.ndarray

    @property
    def targets(self) -> tuple[str, ...]:
        return tuple(f"a{i}" for i in range(self.cells.shape[1]))

    @property
    def per_target(self) -> tuple[float | None, ...]:
        out: list[float | None] = []
        for i in range(self.cells.shape[1]):
            col = self.cells[:, i]
            defined = np.sort(col[~np.isnan(col)])
            out.append(float(defined.sum() / defined.size) if defined.size else None)
        return tuple(out)

    @property
    def errors(self) -> tuple[str | None, ...]:
        return tuple(
            None if v is not None else "all entries undefined (no significant steps)"
            for v in self.per_target
        )

    @property
    def aggregate(self) -> float | None:
        defined = np.sort(self.cells[~np.isnan(self.cells)])
        if defined.size == 0:
            return None
        return float(defined.sum() / defined.size)


def smoothness_result(trace: InterpolationTrace) -> InterpolatabilityResult:
    return InterpolatabilityResult("smoothness", smoothness(trace))


def monotonicity_result(trace: InterpolationTrace) -> InterpolatabilityResult:
    return InterpolatabilityResult("monotonicity", monotonicity(trace))
