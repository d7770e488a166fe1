"""Seeded random-fixture generation shared by acceptance and parity export.

The discrete acceptance criterion and the bindings parity suite must agree
on which 200 fixtures they cover, so the draw procedure lives here and both
sides address fixtures by index.
"""

import numpy as np

import oracles


def rank_stable(values, *, allow_equal=True):
    """Whether an argmax over these scores is well defined across fp paths.

    Two mathematically equal MI values reached through different joint
    tables can disagree in their last bits, making the implementation's
    exact-equality argmax and the oracle's tolerance-grouped argmax pick
    different winners; such knife-edge fixtures are rejected at draw time.
    """
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            close = abs(vals[i] - vals[j]) < 1e-9
            if close and (vals[i] != vals[j] or not allow_equal):
                return False
    return True


def _draw(rng):
    n = int(rng.integers(8, 65))
    n_dims = int(rng.integers(2, 5))
    # the injective regularization map needs at least as many dims as attrs
    n_attrs = int(rng.integers(2, min(3, n_dims) + 1))
    z_cols = [rng.integers(0, int(rng.integers(2, 9)), n).astype(float) for _ in range(n_dims)]
    a_cols = [rng.integers(0, int(rng.integers(2, 9)), n).astype(float) for _ in range(n_attrs)]
    if any(len(set(col)) < 2 for col in a_cols):
        return None  # constant attribute: degenerate SAP target
    reg = tuple(int(d) for d in rng.permutation(n_dims)[:n_attrs])
    matrix = oracles.oracle_mi_matrix(z_cols, a_cols)
    if not all(rank_stable(row, allow_equal=False) for row in matrix):
        return None
    if not all(rank_stable(col, allow_equal=False) for col in zip(*matrix)):
        return None
    sap_scores = [
        [oracles.oracle_predictability(zc, a, True) for zc in z_cols] for a in a_cols
    ]
    if not all(rank_stable(row) for row in sap_scores):
        return None
    return z_cols, a_cols, reg


def discrete_fixture(index: int, *, salt: int = 20260814, max_tries: int = 200):
    """The rank-stable all-discrete fixture for one acceptance index."""
    rng = np.random.default_rng([index, salt])
    for _ in range(max_tries):
        fixture = _draw(rng)
        if fixture is not None:
            return fixture
    raise RuntimeError(f"fixture {index}: no rank-stable draw in {max_tries} tries")
