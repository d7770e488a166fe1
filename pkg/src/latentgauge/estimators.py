"""Information-theoretic and predictive estimators underlying all metrics.

All quantities are in nats.  Four estimator families are used:

* discrete entropy / mutual information: plug-in contingency-table
  estimates from empirical frequencies,
* continuous-continuous mutual information: the classic kNN estimator
  (variant 1), ``psi(k) + psi(N) - <psi(nx+1) + psi(ny+1)>`` with the
  Chebyshev metric in the joint space,
* mixed discrete-continuous mutual information: the within-class kNN
  radius estimator, ``psi(N) + <psi(k_i)> - <psi(N_yi)> - <psi(m_i)>``,
* continuous entropy: the Kozachenko-Leonenko kNN estimator.

Determinism contract: every estimate is a pure function of (values, config).
Continuous columns receive a tiny tie-breaking jitter keyed by
``(seed, argument slot, rank of the value within its column)``, produced by a
counter-based generator, so results are independent of row order.  Every
floating-point reduction over samples is performed in sorted order for the
same reason.  Equal column values receive equal jitter, so duplicated
columns produce bit-identical estimates and exact argmax ties downstream.

Raw kNN mutual-information estimates can come out slightly negative; they
are clamped at zero before any metric consumes them.  Discrete-discrete
mutual information is additionally clamped at ``min(H(x), H(y))`` and
detected exact independence (the contingency table factorizes over integer
counts) returns exactly 0.0, which keeps the plug-in identities
``I(x,x) = H(x)`` and ``I(x,y) <= min(H(x), H(y))`` bit-exact.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .batches import AttributeBatch, LatentBatch
from .config import CONTINUOUS, DISCRETE, EstimatorConfig, normalize_kind

__all__ = [
    "entropy",
    "conditional_entropy",
    "mutual_info",
    "predictability_score",
    "mi_matrix",
    "latent_column_kind",
]

_SLOT_X = 0
_SLOT_Y = 1


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size < 2:
        raise ValueError(f"{name} needs at least 2 samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _check_discrete(x: np.ndarray, name: str) -> None:
    if not np.array_equal(x, np.round(x)):
        raise ValueError(f"{name} is declared discrete but holds non-integer values")


def _check_k(cfg: EstimatorConfig, n: int) -> None:
    if cfg.k_neighbors >= n:
        raise ValueError(f"k_neighbors={cfg.k_neighbors} must be smaller than the sample count {n}")


def _resolve_seed(cfg: EstimatorConfig) -> int:
    if cfg.seed is not None:
        return cfg.seed
    # seedless mode draws fresh entropy on every call
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])


def _sorted_mean(terms: np.ndarray) -> float:
    # canonical reduction order: bit-identical under any row permutation
    return float(np.sort(terms).sum() / terms.size)


def _jitter(values: np.ndarray, cfg: EstimatorConfig, seed: int, slot: int) -> np.ndarray:
    """Tie-breaking jitter for a continuous column.

    The perturbation of a value depends only on (seed, slot, rank of the
    value among the column's sorted unique values), never on the row index.
    """
    if cfg.jitter_scale == 0.0:
        return values
    sorted_vals = np.sort(values)
    std = float(sorted_vals.std())
    if std == 0.0:
        return values
    uniq, inverse = np.unique(values, return_inverse=True)
    gen = np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, slot]))
    u = gen.uniform(-1.0, 1.0, size=uniq.size)
    return values + (cfg.jitter_scale * std) * u[inverse]


# --- discrete plug-in machinery --------------------------------------------

def _codes(x: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inverse = np.unique(x, return_inverse=True)
    return inverse, uniq.size


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    # term form (c/n) * log(n/c): every term is >= 0 in floating point and a
    # constant column comes out exactly 0, unlike log(n) - sum(c log c)/n
    c = np.sort(counts[counts > 0]).astype(np.float64)
    return float(((c / n) * np.log(n / c)).sum())


def _joint_table(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    cx, nx = _codes(x)
    cy, ny = _codes(y)
    flat = np.bincount(cx * ny + cy, minlength=nx * ny)
    return flat.reshape(nx, ny)


def _factorizes(table: np.ndarray, n: int) -> bool:
    """True when the empirical joint distribution is exactly a product."""
    row = table.sum(axis=1)
    col = table.sum(axis=0)
    return bool(np.array_equal(table * n, np.outer(row, col)))


def _discrete_entropy(x: np.ndarray) -> float:
    _, counts = np.unique(x, return_counts=True)
    return _entropy_from_counts(counts, x.size)


def _discrete_mi(x: np.ndarray, y: np.ndarray) -> float:
    n = x.size
    table = _joint_table(x, y)
    if _factorizes(table, n):
        return 0.0
    hx = _entropy_from_counts(table.sum(axis=1), n)
    hy = _entropy_from_counts(table.sum(axis=0), n)
    hxy = _entropy_from_counts(table.reshape(-1), n)
    return min(max(hx + hy - hxy, 0.0), min(hx, hy))


# --- kNN machinery ----------------------------------------------------------

def _strict_ball_counts(vals: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Per point, how many values satisfy |v - vals[i]| < radii[i].

    Counted as a closed ball of radius nextafter(r, 0) so the comparison uses
    the same floating-point distance the neighbor tree produced; an open
    interval built from fl(c + r) re-rounds and makes the boundary neighbor's
    membership depend on low-order bits.  The center itself is included, and
    a zero radius degenerates to counting exact coincidences.
    """
    tree = cKDTree(vals.reshape(-1, 1))
    shrunk = np.nextafter(radii, 0.0)
    return tree.query_ball_point(vals.reshape(-1, 1), shrunk, p=np.inf, return_length=True)


def _ksg_mi(x: np.ndarray, y: np.ndarray, cfg: EstimatorConfig, seed: int) -> float:
    k = cfg.k_neighbors
    n = x.size
    xj = _jitter(x, cfg, seed, _SLOT_X)
    yj = _jitter(y, cfg, seed, _SLOT_Y)
    pts = np.column_stack([xj, yj])
    tree = cKDTree(pts)
    eps = tree.query(pts, k=k + 1, p=np.inf)[0][:, k]
    nx = np.maximum(_strict_ball_counts(xj, eps) - 1, 0)
    ny = np.maximum(_strict_ball_counts(yj, eps) - 1, 0)
    terms = digamma(nx + 1.0) + digamma(ny + 1.0)
    mi = float(digamma(k)) + float(digamma(n)) - _sorted_mean(terms)
    return max(mi, 0.0)


def _ross_mi(cont: np.ndarray, disc: np.ndarray, cfg: EstimatorConfig, seed: int, cont_slot: int) -> float:
    """Mixed-pair mutual information from within-class kNN radii."""
    k = cfg.k_neighbors
    cj = _jitter(cont, cfg, seed, cont_slot)
    codes, n_classes = _codes(disc)
    class_sizes = np.bincount(codes, minlength=n_classes)
    sizes_per_row = class_sizes[codes]
    keep = sizes_per_row > 1
    if not np.any(keep):
        raise ValueError("discrete column has only singleton classes; mixed MI is undefined")
    radii = np.zeros(cj.size)
    k_row = np.minimum(k, sizes_per_row - 1)
    for c in range(n_classes):
        mask = codes == c
        if class_sizes[c] < 2:
            continue
        kc = min(k, class_sizes[c] - 1)
        member = cj[mask].reshape(-1, 1)
        tree = cKDTree(member)
        radii[mask] = tree.query(member, k=kc + 1, p=np.inf)[0][:, kc]
    cj = cj[keep]
    radii = radii[keep]
    k_row = k_row[keep]
    sizes = sizes_per_row[keep]
    m = _strict_ball_counts(cj, radii)
    n_eff = cj.size
    mi = (
        float(digamma(n_eff))
        + _sorted_mean(digamma(k_row.astype(np.float64)))
        - _sorted_mean(digamma(sizes.astype(np.float64)))
        - _sorted_mean(digamma(m.astype(np.float64)))
    )
    return max(mi, 0.0)


def _kl_entropy(x: np.ndarray, cfg: EstimatorConfig, seed: int) -> float:
    k = cfg.k_neighbors
    n = x.size
    xj = _jitter(x, cfg, seed, _SLOT_X)
    pts = xj.reshape(-1, 1)
    tree = cKDTree(pts)
    eps = tree.query(pts, k=k + 1, p=np.inf)[0][:, k]
    with np.errstate(divide="ignore"):
        log_eps = np.log(eps)
    return float(digamma(n)) - float(digamma(k)) + float(np.log(2.0)) + _sorted_mean(log_eps)


# --- public operations ------------------------------------------------------

def entropy(x, x_kind: str = DISCRETE, cfg: EstimatorConfig | None = None) -> float:
    """Entropy of a single variable, in nats.

    Discrete columns use the plug-in Shannon entropy of the empirical
    frequencies (always >= 0).  Continuous columns use the
    Kozachenko-Leonenko kNN differential entropy, which may be negative.
    """
    cfg = cfg or EstimatorConfig()
    x_kind = normalize_kind(x_kind)
    xv = _as_vector(x, "x")
    if x_kind == DISCRETE:
        _check_discrete(xv, "x")
        return _discrete_entropy(xv)
    _check_k(cfg, xv.size)
    return _kl_entropy(xv, cfg, _resolve_seed(cfg))


def mutual_info(x, x_kind: str, y, y_kind: str, cfg: EstimatorConfig | None = None) -> float:
    """Mutual information between two columns, in nats, clamped at 0.

    Dispatches on the column kinds: plug-in contingency table for
    discrete-discrete, kNN (variant 1, Chebyshev metric) for
    continuous-continuous, within-class kNN radii for mixed pairs.
    """
    cfg = cfg or EstimatorConfig()
    x_kind = normalize_kind(x_kind)
    y_kind = normalize_kind(y_kind)
    xv = _as_vector(x, "x")
    yv = _as_vector(y, "y")
    if xv.size != yv.size:
        raise ValueError(f"length mismatch: x has {xv.size} samples, y has {yv.size}")
    if x_kind == DISCRETE:
        _check_discrete(xv, "x")
    if y_kind == DISCRETE:
        _check_discrete(yv, "y")
    if CONTINUOUS in (x_kind, y_kind):
        _check_k(cfg, xv.size)
    if x_kind == DISCRETE and y_kind == DISCRETE:
        return _discrete_mi(xv, yv)
    seed = _resolve_seed(cfg)
    if x_kind == CONTINUOUS and y_kind == CONTINUOUS:
        return _ksg_mi(xv, yv, cfg, seed)
    if x_kind == CONTINUOUS:
        return _ross_mi(xv, yv, cfg, seed, _SLOT_X)
    return _ross_mi(yv, xv, cfg, seed, _SLOT_Y)


def conditional_entropy(a, a_kind: str, b, b_kind: str, cfg: EstimatorConfig | None = None) -> float:
    """Conditional entropy H(a|b), in nats.

    Discrete-discrete pairs use the plug-in identity H(a,b) - H(b), clamped
    at 0; an exactly factorizing joint table short-circuits to H(a).  Any
    continuous argument falls back to H(a) - I(a;b) with this module's
    estimators (no clamp: differential conditional entropy may be negative).
    """
    cfg = cfg or EstimatorConfig()
    a_kind = normalize_kind(a_kind)
    b_kind = normalize_kind(b_kind)
    av = _as_vector(a, "a")
    bv = _as_vector(b, "b")
    if av.size != bv.size:
        raise ValueError(f"length mismatch: a has {av.size} samples, b has {bv.size}")
    if a_kind == DISCRETE and b_kind == DISCRETE:
        _check_discrete(av, "a")
        _check_discrete(bv, "b")
        n = av.size
        table = _joint_table(av, bv)
        if _factorizes(table, n):
            return _entropy_from_counts(table.sum(axis=1), n)
        hb = _entropy_from_counts(table.sum(axis=0), n)
        hab = _entropy_from_counts(table.reshape(-1), n)
        return max(hab - hb, 0.0)
    return entropy(av, a_kind, cfg) - mutual_info(av, a_kind, bv, b_kind, cfg)


def _best_balanced_accuracy(z: np.ndarray, positive: np.ndarray) -> float:
    """Best balanced accuracy of a single-threshold rule over both orientations."""
    order = np.argsort(z, kind="stable")
    zs = z[order]
    ps = positive[order].astype(np.int64)
    n_pos = int(ps.sum())
    n_neg = ps.size - n_pos
    cum_pos = np.concatenate([[0], np.cumsum(ps)])
    # candidate splits: before everything, between distinct values, after everything
    boundaries = np.flatnonzero(zs[1:] != zs[:-1]) + 1
    splits = np.concatenate([[0], boundaries, [ps.size]])
    pos_left = cum_pos[splits]
    neg_left = splits - pos_left
    tpr = (n_pos - pos_left) / n_pos  # predict positive on the right
    tnr = neg_left / n_neg
    ba = (tpr + tnr) / 2.0
    ba = np.maximum(ba, 1.0 - ba)
    return float(np.max(ba))


def predictability_score(z_col, a, a_kind: str, cfg: EstimatorConfig | None = None) -> float:
    """How well a single latent column predicts one attribute, in [0, 1].

    Continuous attributes score the R^2 of the 1-D least-squares line
    predicting ``a`` from ``z_col`` (0 by convention for a constant latent
    column).  Discrete attributes score the balanced accuracy of the best
    deterministic 1-D threshold classifier: the single best threshold for
    binary attributes, macro-averaged one-vs-rest thresholds otherwise.
    Scores are computed on the full batch, no held-out split.
    """
    cfg = cfg or EstimatorConfig()
    a_kind = normalize_kind(a_kind)
    zv = _as_vector(z_col, "z_col")
    av = _as_vector(a, "a")
    if zv.size != av.size:
        raise ValueError(f"length mismatch: z_col has {zv.size} samples, a has {av.size}")
    if zv.size < 4:
        raise ValueError(f"predictability needs at least 4 samples, got {zv.size}")
    if a_kind == DISCRETE:
        _check_discrete(av, "a")
        classes = np.unique(av)
        if classes.size < 2:
            raise ValueError("attribute is constant; predictability is undefined")
        if classes.size == 2:
            return _best_balanced_accuracy(zv, av == classes[1])
        per_class = [_best_balanced_accuracy(zv, av == c) for c in classes]
        return float(np.mean(per_class))
    a_sorted = np.sort(av)
    z_sorted = np.sort(zv)
    ma = float(a_sorted.sum() / a_sorted.size)
    mz = float(z_sorted.sum() / z_sorted.size)
    da = av - ma
    dz = zv - mz
    saa = float(np.sort(da * da).sum())
    szz = float(np.sort(dz * dz).sum())
    if saa == 0.0:
        raise ValueError("attribute is constant; predictability is undefined")
    if szz == 0.0:
        return 0.0
    sza = float(np.sort(dz * da).sum())
    r2 = (sza * sza) / (szz * saa)
    return min(max(r2, 0.0), 1.0)


def latent_column_kind(col: np.ndarray) -> str:
    """Estimator kind for one latent column: discrete iff integer-valued.

    Latent batches carry no kind metadata, so the kind is a property of the
    column itself.  A column whose every entry is an exact integer has finite
    support and gets the plug-in treatment (kNN estimators are ill-posed on
    heavily tied data); real-valued codes from an actual model are treated
    as continuous.
    """
    return DISCRETE if np.array_equal(col, np.round(col)) else CONTINUOUS


def mi_matrix(z, a, cfg: EstimatorConfig | None = None) -> np.ndarray:
    """A x D matrix of mutual informations between attributes and latents.

    Entry (i, d) is exactly ``mutual_info(a_i, z_d)`` with the latent kind
    chosen by ``latent_column_kind``; rows and columns come straight from the
    per-pair estimator, so the matrix is deterministic for a fixed seed.
    """
    cfg = cfg or EstimatorConfig()
    zb = LatentBatch.coerce(z)
    if isinstance(a, AttributeBatch):
        ab = a
    else:
        # a bare array carries no kind declaration, so infer per column the
        # same way latent columns are classified
        raw = AttributeBatch.coerce(a)
        kinds = tuple(latent_column_kind(raw.values[:, i]) for i in range(raw.n_attrs))
        ab = AttributeBatch(raw.values, kinds)
    if zb.n_samples != ab.n_samples:
        raise ValueError(
            f"latents have {zb.n_samples} rows but attributes have {ab.n_samples}"
        )
    z_kinds = [latent_column_kind(zb.values[:, d]) for d in range(zb.n_dims)]
    out = np.empty((ab.n_attrs, zb.n_dims))
    for i in range(ab.n_attrs):
        for d in range(zb.n_dims):
            out[i, d] = mutual_info(ab.values[:, i], ab.kinds[i], zb.values[:, d], z_kinds[d], cfg)
    return out
