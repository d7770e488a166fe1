"""Regenerate the golden CLI fixtures and reports under tests/data/golden/.

The acceptance suite compares live CLI output byte-for-byte against these
files, so rerun this script only when the report schema intentionally
changes, and commit the diff.
"""

from __future__ import annotations

import pathlib

import numpy as np

from latentgauge.cli import run_cli

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "golden"


def write_csv(path: pathlib.Path, array: np.ndarray, header: tuple[str, ...] | None = None):
    rows = [",".join(f"{v:.17g}" for v in row) for row in np.atleast_2d(array)]
    if header is not None:
        rows.insert(0, ",".join(header))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)

    # one attribute perfectly coded by z0 and ignored by z1: MIG is exactly 1
    a = np.repeat(np.arange(4.0), 2).reshape(-1, 1)
    z = np.column_stack([a[:, 0], np.zeros(len(a))])
    write_csv(GOLDEN / "mig_z.csv", z, header=("z0", "z1"))
    write_csv(GOLDEN / "mig_a.csv", a, header=("a0",))
    code = run_cli([
        "disent",
        "--latents", str(GOLDEN / "mig_z.csv"),
        "--attributes", str(GOLDEN / "mig_a.csv"),
        "--metrics", "mig", "--discrete", "true", "--seed", "42",
        "--output", str(GOLDEN / "mig_report.json"),
    ])
    assert code == 0, "mig golden run failed"

    # dependent attributes (a1 = a0 mod 2), both regularized: MIG 0.5, DMIG 1.0
    a0 = np.repeat(np.arange(4.0), 4)
    a1 = a0 % 2.0
    pair = np.column_stack([a0, a1])
    write_csv(GOLDEN / "dami_z.csv", pair, header=("z0", "z1"))
    write_csv(GOLDEN / "dami_a.csv", pair, header=("a0", "a1"))
    np.save(GOLDEN / "dami_z.npy", pair)
    np.save(GOLDEN / "dami_a.npy", pair)
    code = run_cli([
        "bundle", "--bundle", "dami",
        "--latents", str(GOLDEN / "dami_z.csv"),
        "--attributes", str(GOLDEN / "dami_a.csv"),
        "--reg-dim", "0,1", "--discrete", "true", "--seed", "42",
        "--output", str(GOLDEN / "dami_report.json"),
    ])
    assert code == 0, "dami golden run failed"
    print(f"wrote golden files to {GOLDEN}")


if __name__ == "__main__":
    main()
