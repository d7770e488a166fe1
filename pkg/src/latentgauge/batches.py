"""Validated containers for latent codes, attributes and interpolation traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .config import CONTINUOUS, DISCRETE, normalize_kind

ArrayLike = Union[np.ndarray, Sequence[Sequence[float]]]


def _as_matrix(values: ArrayLike, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError(f"{name} needs at least 2 rows, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class LatentBatch:
    """N x D matrix of latent codes, one row per sample.

    Gap-based metrics additionally require D >= 2; that is checked by the
    metrics themselves so that single-column mutual-information tables stay
    usable.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_matrix(self.values, "latents"))

    @classmethod
    def coerce(cls, z: "LatentBatch | ArrayLike") -> "LatentBatch":
        return z if isinstance(z, cls) else cls(z)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_dims(self) -> int:
        return self.values.shape[1]


def normalize_kinds(discrete: Union[bool, Sequence[bool], Sequence[str]], n_attrs: int) -> tuple[str, ...]:
    """Expand a discrete flag (scalar or per-attribute) into kind strings."""
    if isinstance(discrete, (bool, np.bool_)):
        return (DISCRETE if discrete else CONTINUOUS,) * n_attrs
    flags = list(discrete)
    if len(flags) != n_attrs:
        raise ValueError(f"expected {n_attrs} attribute kinds, got {len(flags)}")
    kinds = []
    for f in flags:
        if isinstance(f, (bool, np.bool_)):
            kinds.append(DISCRETE if f else CONTINUOUS)
        else:
            kinds.append(normalize_kind(f))
    return tuple(kinds)


@dataclass(frozen=True)
class AttributeBatch:
    """N x A matrix of attribute values with a per-attribute kind.

    Discrete columns must hold values exactly representable as integers.
    """

    values: np.ndarray
    kinds: tuple[str, ...] = ()

    def __post_init__(self):
        arr = _as_matrix(self.values, "attributes")
        object.__setattr__(self, "values", arr)
        kinds = self.kinds or (CONTINUOUS,) * arr.shape[1]
        kinds = tuple(normalize_kind(k) for k in kinds)
        if len(kinds) != arr.shape[1]:
            raise ValueError(f"expected {arr.shape[1]} attribute kinds, got {len(kinds)}")
        object.__setattr__(self, "kinds", kinds)
        for i, kind in enumerate(kinds):
            if kind == DISCRETE:
                col = arr[:, i]
                if not np.array_equal(col, np.round(col)):
                    raise ValueError(f"attribute column {i} is discrete but holds non-integer values")

    @classmethod
    def coerce(cls, a: "AttributeBatch | ArrayLike", discrete: Union[bool, Sequence[bool]] = False) -> "AttributeBatch":
        if isinstance(a, cls):
            return a
        arr = _as_matrix(a, "attributes")
        return cls(arr, normalize_kinds(discrete, arr.shape[1]))

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_attrs(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class RegularizationMap:
    """Assignment of each attribute to the latent dimension regularizing it.

    ``reg_dim[i]`` is the latent dimension paired with attribute ``i``;
    ``blind_dims`` is the derived, always-recomputed set of latent dimensions
    that regularize no attribute.
    """

    reg_dim: tuple[int, ...]
    n_dims: int

    def __post_init__(self):
        dims = tuple(int(d) for d in self.reg_dim)
        object.__setattr__(self, "reg_dim", dims)
        if self.n_dims < 1:
            raise ValueError("n_dims must be positive")
        for d in dims:
            if not 0 <= d < self.n_dims:
                raise ValueError(f"reg_dim entry {d} out of range for {self.n_dims} latent dimensions")
        if len(set(dims)) != len(dims):
            raise ValueError(f"reg_dim entries must be pairwise distinct, got {dims}")

    @classmethod
    def identity(cls, n_attrs: int, n_dims: int) -> "RegularizationMap":
        """Default assignment: attribute i regularized by latent dimension i."""
        if n_attrs > n_dims:
            raise ValueError(
                f"default regularization needs at least as many latent dimensions "
                f"({n_dims}) as attributes ({n_attrs})"
            )
        return cls(tuple(range(n_attrs)), n_dims)

    @classmethod
    def coerce(cls, reg, n_attrs: int, n_dims: int) -> "RegularizationMap":
        if reg is None:
            return cls.identity(n_attrs, n_dims)
        if isinstance(reg, cls):
            if reg.n_dims != n_dims:
                raise ValueError(f"regularization map built for {reg.n_dims} dimensions, batch has {n_dims}")
            if len(reg.reg_dim) != n_attrs:
                raise ValueError(f"regularization map covers {len(reg.reg_dim)} attributes, batch has {n_attrs}")
            return reg
        mapped = cls(tuple(int(d) for d in reg), n_dims)
        if len(mapped.reg_dim) != n_attrs:
            raise ValueError(f"reg_dim lists {len(mapped.reg_dim)} dimensions but there are {n_attrs} attributes")
        return mapped

    @property
    def blind_dims(self) -> tuple[int, ...]:
        used = set(self.reg_dim)
        return tuple(d for d in range(self.n_dims) if d not in used)

    def attribute_for_dim(self, dim: int) -> int | None:
        """Attribute index regularized by ``dim``, or None."""
        for i, d in enumerate(self.reg_dim):
            if d == dim:
                return i
        return None


@dataclass(frozen=True)
class InterpolationTrace:
    """Attribute measurements on equally spaced latent interpolation grids.

    ``measurements[s, i, k]`` is the value of attribute ``i`` measured on the
    sample generated from the k-th grid point along the latent direction
    regularizing attribute ``i``, starting at sample ``s``.

    Attributes:
        measurements: S x A x K tensor of measured attribute values.
        delta: Positive latent step between consecutive grid points.
        epsilon: Noise threshold below which attribute differences are
            ignored by the monotonicity metric.
    """

    measurements: np.ndarray
    delta: float
    epsilon: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.measurements, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"measurements must be S x A x K, got shape {arr.shape}")
        if arr.shape[2] < 2:
            raise ValueError(f"need at least 2 grid points, got {arr.shape[2]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("measurements contain non-finite entries")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        object.__setattr__(self, "measurements", arr)
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @property
    def n_samples(self) -> int:
        return self.measurements.shape[0]

    @property
    def n_attrs(self) -> int:
        return self.measurements.shape[1]

    @property
    def n_points(self) -> int:
        return self.measurements.shape[2]
