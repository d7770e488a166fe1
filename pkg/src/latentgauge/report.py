"""Lossless JSON report documents.

A ReportDocument freezes one compute run: a config echo plus, per metric,
the target labels, per-target values, error messages, warnings and the
aggregate.  Interpolatability metrics additionally carry the full
per-(sample, attribute) cell matrix, since their per-target vector is a
reduction.

Serialization is deterministic down to the byte: keys appear in a fixed
order, floats are written with 17 significant digits (enough to round-trip
an IEEE double exactly), integral floats keep a trailing ``.0`` so the type
survives re-parsing, and undefined values are ``null``.  The emitter is
hand-rolled because the stdlib encoder offers no control over float
formatting.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .session import MetricReport

__all__ = [
    "SCHEMA_VERSION",
    "ReportConfig",
    "ReportEntry",
    "ReportDocument",
    "build_report",
    "to_json",
    "from_json",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReportConfig:
    """Echo of the settings a report was computed under."""

    seed: int | None
    k_neighbors: int
    reg_dim: tuple[int, ...] | None
    delta: float | None
    epsilon: float | None
    metrics: tuple[str, ...]


@dataclass(frozen=True)
class ReportEntry:
    """Serialized form of one metric's result."""

    metric: str
    targets: tuple[str, ...]
    values: tuple[float | None, ...]
    errors: tuple[str | None, ...]
    warnings: tuple[str, ...]
    aggregate: float | None
    cells: tuple[tuple[float | None, ...], ...] | None = None


@dataclass(frozen=True)
class ReportDocument:
    schema_version: int
    config: ReportConfig
    results: tuple[ReportEntry, ...]


def _entry_from_result(result) -> ReportEntry:
    cells = None
    if hasattr(result, "cells"):
        cells = tuple(
            tuple(None if math.isnan(v) else float(v) for v in row)
            for row in np.asarray(result.cells)
        )
    aggregate = result.aggregate
    return ReportEntry(
        metric=result.metric_id,
        targets=tuple(result.targets),
        values=tuple(None if v is None else float(v) for v in result.per_target),
        errors=tuple(result.errors),
        warnings=tuple(getattr(result, "warnings", ())),
        aggregate=None if aggregate is None else float(aggregate),
        cells=cells,
    )


def build_report(report: MetricReport, *, seed, k_neighbors,
                 reg_dim=None, delta=None, epsilon=None) -> ReportDocument:
    """Wrap a MetricReport and its settings into a serializable document."""
    config = ReportConfig(
        seed=None if seed is None else int(seed),
        k_neighbors=int(k_neighbors),
        reg_dim=None if reg_dim is None else tuple(int(d) for d in reg_dim),
        delta=None if delta is None else float(delta),
        epsilon=None if epsilon is None else float(epsilon),
        metrics=report.metric_ids,
    )
    return ReportDocument(
        schema_version=SCHEMA_VERSION,
        config=config,
        results=tuple(_entry_from_result(r) for r in report.results),
    )


# --- emission ----------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite values must be mapped to null before emission")
    s = f"{x:.17g}"
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(value, indent: int, pieces: list) -> None:
    pad = "  " * indent
    if value is None:
        pieces.append("null")
    elif isinstance(value, bool):
        pieces.append("true" if value else "false")
    elif isinstance(value, int):
        pieces.append(str(value))
    elif isinstance(value, float):
        pieces.append(_fmt_float(value))
    elif isinstance(value, str):
        pieces.append(json.dumps(value, ensure_ascii=True))
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, item in enumerate(value):
            pieces.append(pad + "  ")
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i + 1 < len(value) else "\n")
        pieces.append(pad + "]")
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        items = list(value.items())
        for i, (key, item) in enumerate(items):
            pieces.append(pad + "  " + json.dumps(key, ensure_ascii=True) + ": ")
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i + 1 < len(items) else "\n")
        pieces.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def _document_payload(doc: ReportDocument) -> dict:
    # insertion order here is the on-disk key order
    results = []
    for entry in doc.results:
        payload = {
            "metric": entry.metric,
            "targets": list(entry.targets),
            "values": list(entry.values),
            "errors": list(entry.errors),
            "warnings": list(entry.warnings),
            "aggregate": entry.aggregate,
        }
        if entry.cells is not None:
            payload["cells"] = [list(row) for row in entry.cells]
        results.append(payload)
    return {
        "schema_version": doc.schema_version,
        "config": {
            "seed": doc.config.seed,
            "k_neighbors": doc.config.k_neighbors,
            "reg_dim": None if doc.config.reg_dim is None else list(doc.config.reg_dim),
            "delta": doc.config.delta,
            "epsilon": doc.config.epsilon,
            "metrics": list(doc.config.metrics),
        },
        "results": results,
    }


def to_json(doc: ReportDocument) -> str:
    """Byte-deterministic JSON text for a document (no trailing newline)."""
    pieces: list = []
    _emit(_document_payload(doc), 0, pieces)
    return "".join(pieces)


# --- parsing -----------------------------------------------------------

def _opt_float(value, what: str) -> float | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{what} must be a number or null")
    return float(value)


def from_json(text: str) -> ReportDocument:
    """Parse a report; inverse of ``to_json`` down to float bit patterns."""
    raw = json.loads(text)
    if not isinstance(raw, dict):
        raise ValueError("report must be a JSON object")
    try:
        version = raw["schema_version"]
        cfg = raw["config"]
        results = raw["results"]
    except KeyError as missing:
        raise ValueError(f"report is missing key {missing}") from None
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    config = ReportConfig(
        seed=cfg["seed"],
        k_neighbors=cfg["k_neighbors"],
        reg_dim=None if cfg["reg_dim"] is None else tuple(cfg["reg_dim"]),
        delta=_opt_float(cfg["delta"], "delta"),
        epsilon=_opt_float(cfg["epsilon"], "epsilon"),
        metrics=tuple(cfg["metrics"]),
    )
    entries = []
    for item in results:
        cells = item.get("cells")
        entries.append(ReportEntry(
            metric=item["metric"],
            targets=tuple(item["targets"]),
            values=tuple(_opt_float(v, "value") for v in item["values"]),
            errors=tuple(item["errors"]),
            warnings=tuple(item["warnings"]),
            aggregate=_opt_float(item["aggregate"], "aggregate"),
            cells=None if cells is None else tuple(
                tuple(_opt_float(v, "cell") for v in row) for row in cells
            ),
        ))
    return ReportDocument(version, config, tuple(entries))
