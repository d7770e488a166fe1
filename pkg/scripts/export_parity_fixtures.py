"""Export bindings parity fixtures to frontend/tests/fixtures/parity.json.

The frontend shim must reproduce core values bit-identically (acceptance
criterion: bindings parity).  This script runs every fixture family from
the primary acceptance suite through the core's functional API and freezes
inputs plus expected outputs as JSON.  Python's repr-based float
serialization is shortest-round-trip, so both the inputs the shim feeds
back through NPY and the expected outputs it compares against carry the
exact IEEE doubles.

Random interpolatability traces are exported in chunks sharing one
(A, K, delta, epsilon) tuple because the CLI trace format fixes those per
invocation; 20 chunks x 50 samples cover the same 1000-trace budget as the
primary bound check.
"""

from __future__ import annotations

import json
import pathlib
import sys

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import fixture_bank  # noqa: E402

from latentgauge import (  # noqa: E402
    EstimatorConfig,
    InterpolationTrace,
    MetricSession,
    dami_bundle,
    dlig,
    dmig,
    mig,
    modularity,
    monotonicity_result,
    sap,
    smoothness_result,
    xmig,
)

OUT = ROOT / "frontend" / "tests" / "fixtures" / "parity.json"
CFG = EstimatorConfig(seed=42, k_neighbors=3)


def rows(array: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.atleast_2d(array)]


def entry(result) -> dict:
    payload = {
        "metric": result.metric_id,
        "targets": list(result.targets),
        "values": [None if v is None else float(v) for v in result.per_target],
        "errors": list(result.errors),
        "aggregate": None if result.aggregate is None else float(result.aggregate),
    }
    if hasattr(result, "cells"):
        cells = np.asarray(result.cells)
        payload["cells"] = [
            [None if np.isnan(v) else float(v) for v in row] for row in cells
        ]
    return payload


def discrete_fixtures() -> list[dict]:
    out = []
    for index in range(200):
        z_cols, a_cols, reg = fixture_bank.discrete_fixture(index)
        z = np.array(z_cols).T
        a = np.array(a_cols).T
        expected = {
            "mig": entry(mig(z, a, CFG, discrete=True)),
            "sap": entry(sap(z, a, CFG, discrete=True)),
            "modularity": entry(modularity(z, a, CFG, discrete=True)),
            "dmig": entry(dmig(z, a, reg=reg, cfg=CFG, discrete=True)),
            "dlig": entry(dlig(z, a, reg=reg, cfg=CFG, discrete=True)),
        }
        # with no blind dimensions the functional xmig raises; the shim is
        # expected to throw, so no value is exported
        if len(reg) < z.shape[1]:
            expected["xmig"] = entry(xmig(z, a, reg=reg, cfg=CFG, discrete=True))
        out.append({
            "index": index,
            "z": rows(z),
            "a": rows(a),
            "reg": list(reg),
            "expected": expected,
        })
    return out


def gaussian_fixtures() -> list[dict]:
    out = []
    for rho in (0.0, 0.5, 0.8):
        rng = np.random.default_rng(13)
        x = rng.standard_normal(5000)
        noise = rng.standard_normal(5000)
        y = rho * x + np.sqrt(1.0 - rho * rho) * noise
        z = np.column_stack([x, y])
        a = y.reshape(-1, 1)
        out.append({
            "rho": rho,
            "z": rows(z),
            "a": rows(a),
            "expected": {"mig": entry(mig(z, a, CFG, discrete=False))},
        })
    return out


def perfect_fixture() -> dict:
    a0 = np.repeat(np.arange(4.0), 4)
    a1 = np.tile(np.arange(4.0), 4)
    a = np.column_stack([a0, a1])
    z = np.column_stack([a0, a1, np.zeros(16)])
    return {
        "z": rows(z),
        "a": rows(a),
        "reg": [0, 1],
        "expected": {
            "mig": entry(mig(z, a, CFG, discrete=True)),
            "xmig": entry(xmig(z, a, reg=(0, 1), cfg=CFG, discrete=True)),
            "dlig": entry(dlig(z, a, reg=(0, 1), cfg=CFG, discrete=True)),
        },
    }


def sap_continuous_fixture() -> dict:
    rng = np.random.default_rng(3)
    z0 = rng.standard_normal(512)
    z1 = rng.standard_normal(512)
    z = np.column_stack([z0, z1])
    a = (2.0 * z0 + 0.01 * rng.standard_normal(512)).reshape(-1, 1)
    return {"z": rows(z), "a": rows(a), "expected": {"sap": entry(sap(z, a, CFG, discrete=False))}}


def dependency_fixture() -> dict:
    a0 = np.repeat(np.arange(4.0), 4)
    pair = np.column_stack([a0, a0 % 2.0])
    session = MetricSession(dami_bundle(reg=(0, 1), cfg=CFG, discrete=True))
    session.update(z=pair, a=pair)
    report = session.compute()
    return {
        "z": rows(pair),
        "a": rows(pair),
        "reg": [0, 1],
        "expected_bundle": [entry(r) for r in report.results],
    }


def reduction_fixtures() -> list[dict]:
    """A=1 fixtures whose MI runner-up dim is unregularized: DMIG == MIG."""
    import oracles

    out = []
    for index in range(60):
        if len(out) == 10:
            break
        rng = np.random.default_rng([index, 4])
        n = int(rng.integers(8, 65))
        n_dims = int(rng.integers(2, 5))
        z_cols = [rng.integers(0, 5, n).astype(float) for _ in range(n_dims)]
        a_col = rng.integers(0, 5, n).astype(float)
        if len(set(a_col)) < 2:
            continue
        row = [oracles.oracle_mi(a_col, zc) for zc in z_cols]
        if not fixture_bank.rank_stable(row, allow_equal=False):
            continue
        j = oracles.tie_argmax(row)
        if oracles.tie_argmax(row, exclude={j}) == 0:
            continue
        z = np.array(z_cols).T
        a = a_col.reshape(-1, 1)
        out.append({
            "z": rows(z),
            "a": rows(a),
            "reg": [0],
            "expected": {
                "mig": entry(mig(z, a, CFG, discrete=True)),
                "dmig": entry(dmig(z, a, reg=(0,), cfg=CFG, discrete=True)),
            },
        })
    assert len(out) == 10
    return out


def closed_form_traces() -> dict:
    delta = 0.1
    grid = np.arange(5.0) * delta
    measurements = np.stack([
        (grid**2).reshape(1, -1),
        np.array([[0.0, 1.0, 0.0, 1.0, 0.0]]),
        (3.0 * grid).reshape(1, -1),
        (-3.0 * grid).reshape(1, -1),
    ])
    trace = InterpolationTrace(measurements, delta=delta, epsilon=0.0)
    return {
        "samples": 4,
        "attributes": 1,
        "delta": delta,
        "epsilon": 0.0,
        "rows": rows(measurements.reshape(4, -1)),
        "expected": {
            "smoothness": entry(smoothness_result(trace)),
            "monotonicity": entry(monotonicity_result(trace)),
        },
    }


def random_trace_chunks() -> list[dict]:
    out = []
    for chunk in range(20):
        rng = np.random.default_rng([chunk, 58])
        n_attrs = int(rng.integers(1, 4))
        k = int(rng.integers(4, 9))
        delta = float(rng.uniform(0.05, 2.0))
        epsilon = float(rng.uniform(0.0, 0.5))
        measurements = rng.uniform(-8.0, 8.0, size=(50, n_attrs, k))
        trace = InterpolationTrace(measurements, delta=delta, epsilon=epsilon)
        out.append({
            "samples": 50,
            "attributes": n_attrs,
            "delta": delta,
            "epsilon": epsilon,
            "rows": rows(measurements.reshape(50 * n_attrs, k)),
            "expected": {
                "smoothness": entry(smoothness_result(trace)),
                "monotonicity": entry(monotonicity_result(trace)),
            },
        })
    return out


def main() -> None:
    document = {
        "generated_by": "scripts/export_parity_fixtures.py",
        "seed": 42,
        "k_neighbors": 3,
        "discrete": discrete_fixtures(),
        "gaussian": gaussian_fixtures(),
        "perfect": perfect_fixture(),
        "sap_continuous": sap_continuous_fixture(),
        "dependency": dependency_fixture(),
        "reduction": reduction_fixtures(),
        "closed_form_traces": closed_form_traces(),
        "trace_chunks": random_trace_chunks(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=1)
        handle.write("\n")
    print(f"wrote {OUT} ({OUT.stat().st_size / 1e6:.1f} MB)")


if __name__ == "__main__":
    main()
