"""Unsupervised grouping: k-means, Ward agglomerative, DBSCAN, silhouette.

All three work on plain float64 matrices with Euclidean geometry. The
silhouette coefficient is the evaluation currency; it is reported both raw
and normalized by 100, and DBSCAN noise points are excluded from it (the
noise fraction rides along in the result).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import _pure
from .errors import DataError
from .features import FeatureConfig, fit_scaler, apply_scaler, metadata_values

KMEANS_MAX_ITER = 300
DBSCAN_DEFAULT_MIN_PTS = 5

# Above this width the BLAS-backed twin outruns the compiled scalar loops
# (see benchmarks/bench_kernels.py), so distance sums dispatch on dim.
WIDE_MATRIX_DIM = 32


def _distance_sums(points: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    impl = _pure if points.shape[1] >= WIDE_MATRIX_DIM else _kernels
    return impl.cluster_distance_sums(points, labels, k)


@dataclass
class ClusterResult:
    assignments: np.ndarray
    k_found: int
    silhouette: float | None
    silhouette_pct: float | None
    noise_fraction: float = 0.0
    inertia: float | None = None
    meta: dict = field(default_factory=dict)


def _as_matrix(vectors) -> np.ndarray:
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or len(X) == 0:
        raise DataError("clustering expects a non-empty (n, d) matrix")
    return X


def silhouette(vectors, assignments) -> tuple[float, float]:
    """Mean silhouette coefficient and its x100 normalization.

    Per point: s = (b - a) / max(a, b), where a is the mean distance to the
    point's own cluster and b the smallest mean distance to another
    cluster. Singleton clusters score 0; noise labels (< 0) are excluded.
    """
    X = _as_matrix(vectors)
    labels = np.asarray(assignments, dtype=np.int64)
    if len(labels) != len(X):
        raise DataError("assignments length must match the matrix")
    keep = labels >= 0
    X = X[keep]
    labels = labels[keep].astype(np.int32)
    if len(X) == 0:
        raise DataError("no clustered points to evaluate")
    ids = np.unique(labels)
    if len(ids) < 2:
        raise DataError("silhouette is undefined for fewer than 2 clusters")
    remap = {int(c): i for i, c in enumerate(ids)}
    labels = np.array([remap[int(c)] for c in labels], dtype=np.int32)
    k = len(ids)
    counts = np.bincount(labels, minlength=k)
    sums = _distance_sums(X, labels, k)
    n = len(X)
    s_values = np.zeros(n)
    for i in range(n):
        c = labels[i]
        if counts[c] == 1:
            continue
        a = sums[i, c] / (counts[c] - 1)
        b = np.inf
        for other in range(k):
            if other == c:
                continue
            b = min(b, sums[i, other] / counts[other])
        denom = max(a, b)
        if denom > 0:
            s_values[i] = (b - a) / denom
    mean_s = float(s_values.mean())
    return mean_s, mean_s * 100.0


def _assign(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _kmeans_single(X: np.ndarray, k: int, rng: np.random.Generator,
                   trace: list[float] | None = None) -> tuple[np.ndarray, float]:
    n = len(X)
    # k-means++ seeding
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(0, n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total == 0.0:
            idx = int(rng.integers(0, n))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    assignments = _assign(X, centers)
    for _ in range(KMEANS_MAX_ITER):
        for j in range(k):
            members = X[assignments == j]
            if len(members) == 0:
                # re-seed an empty cluster with the point farthest from its center
                dist = ((X - centers[assignments]) ** 2).sum(axis=1)
                centers[j] = X[int(dist.argmax())]
            else:
                centers[j] = members.mean(axis=0)
        new_assignments = _assign(X, centers)
        if trace is not None:
            trace.append(float(((X - centers[new_assignments]) ** 2).sum()))
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
    inertia = float(((X - centers[assignments]) ** 2).sum())
    return assignments, inertia


def kmeans(vectors, k: int = 2, seed: int = 0, n_init: int = 10) -> ClusterResult:
    """Lloyd iterations from k-means++ seeding, best of ``n_init`` restarts."""
    X = _as_matrix(vectors)
    if k < 1 or len(X) < k:
        raise DataError(f"need at least k={k} points, got {len(X)}")
    best: tuple[np.ndarray, float] | None = None
    for ss in np.random.SeedSequence(seed).spawn(n_init):
        assignments, inertia = _kmeans_single(X, k, np.random.default_rng(ss))
        if best is None or inertia < best[1]:
            best = (assignments, inertia)
    assignments, inertia = best
    if k == 1:
        raise DataError("silhouette is undefined for a single cluster (k=1)")
    sil, sil_pct = silhouette(X, assignments)
    k_found = len(np.unique(assignments))
    return ClusterResult(assignments=assignments, k_found=k_found, silhouette=sil,
                         silhouette_pct=sil_pct, inertia=inertia,
                         meta={"algorithm": "kmeans", "n_init": n_init, "seed": seed})


def _ward_cost_update(di: float, dj: float, dij: float,
                      ni: int, nj: int, nk: int) -> float:
    total = ni + nj + nk
    return ((ni + nk) * di + (nj + nk) * dj - nk * dij) / total


def agglomerative(vectors, k: int = 2, linkage: str = "ward") -> ClusterResult:
    """Bottom-up Ward merging until k clusters remain.

    Greedy: every step merges the globally cheapest pair, ties broken by
    the smallest (i, j) indices; costs maintained with the Lance-Williams
    recurrence.
    """
    if linkage != "ward":
        raise DataError(f"unsupported linkage {linkage!r}; only 'ward' is implemented")
    X = _as_matrix(vectors)
    n = len(X)
    if k < 1 or n < k:
        raise DataError(f"need at least k={k} points, got {n}")
    # Ward merge cost between singletons is half the squared distance.
    sq = np.einsum("ij,ij->i", X, X)
    cost = 0.5 * np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    np.fill_diagonal(cost, np.inf)
    sizes = np.ones(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    membership = np.arange(n)
    merges: list[tuple[int, int, float]] = []
    for _ in range(n - k):
        flat = int(np.argmin(cost))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        d_ij = cost[i, j]
        merges.append((i, j, float(d_ij)))
        for m in range(n):
            if not active[m] or m == i or m == j:
                continue
            new_cost = _ward_cost_update(cost[i, m], cost[j, m], d_ij,
                                         int(sizes[i]), int(sizes[j]), int(sizes[m]))
            cost[i, m] = cost[m, i] = new_cost
        sizes[i] += sizes[j]
        active[j] = False
        cost[j, :] = np.inf
        cost[:, j] = np.inf
        membership[membership == j] = i
    roots = {}
    assignments = np.empty(n, dtype=np.int64)
    for idx in range(n):
        root = membership[idx]
        assignments[idx] = roots.setdefault(int(root), len(roots))
    sil, sil_pct = (None, None)
    if k >= 2:
        sil, sil_pct = silhouette(X, assignments)
    return ClusterResult(assignments=assignments, k_found=k, silhouette=sil,
                         silhouette_pct=sil_pct,
                         meta={"algorithm": "agglomerative", "linkage": linkage,
                               "merges": len(merges)})


def default_eps(vectors, sample: int = 1000, seed: int = 0,
                neighbor: int = 5) -> float:
    """Median distance to the ``neighbor``-th nearest point on a sample."""
    X = _as_matrix(vectors)
    n = len(X)
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=min(sample, n), replace=False)
    S = X[idx]
    d2 = ((S[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    d = np.sqrt(np.maximum(d2, 0.0))
    d.sort(axis=1)
    col = min(neighbor, n - 1)
    return float(np.median(d[:, col]))


def dbscan(vectors, eps: float, min_pts: int = DBSCAN_DEFAULT_MIN_PTS) -> ClusterResult:
    """Density clustering with core/border/noise labeling.

    Core points (at least ``min_pts`` neighbors within eps, self included)
    connect into clusters; border points attach to their nearest core
    point, making labels independent of point order; everything else is
    noise (-1). Cluster ids follow scan order of the first core point.
    """
    if eps <= 0 or min_pts < 1:
        raise DataError("eps must be > 0 and min_pts >= 1")
    X = _as_matrix(vectors)
    n = len(X)
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    within = d2 <= eps * eps
    neighbor_counts = within.sum(axis=1)
    core = neighbor_counts >= min_pts
    labels = np.full(n, -1, dtype=np.int64)
    cluster = 0
    for start in range(n):
        if not core[start] or labels[start] >= 0:
            continue
        queue = [start]
        labels[start] = cluster
        while queue:
            p = queue.pop()
            for q in np.flatnonzero(within[p]):
                if core[q] and labels[q] < 0:
                    labels[q] = cluster
                    queue.append(int(q))
        cluster += 1
    core_idx = np.flatnonzero(core)
    if len(core_idx):
        for p in range(n):
            if core[p] or not within[p][core_idx].any():
                continue
            reachable = core_idx[within[p][core_idx]]
            nearest = reachable[int(np.argmin(d2[p][reachable]))]
            labels[p] = labels[nearest]
    noise = float((labels < 0).sum()) / n
    k_found = int(labels.max()) + 1 if labels.max() >= 0 else 0
    sil, sil_pct = (None, None)
    if k_found >= 2:
        sil, sil_pct = silhouette(X, labels)
    return ClusterResult(assignments=labels, k_found=k_found, silhouette=sil,
                         silhouette_pct=sil_pct, noise_fraction=noise,
                         meta={"algorithm": "dbscan", "eps": eps, "min_pts": min_pts,
                               "noise_excluded_from_silhouette": True})


CLUSTER_ALGORITHMS = ("kmeans", "agglomerative", "dbscan")


def run_cluster_ablation(items, algorithm: str,
                         ablation_sets=("A", "B", "C", "D", "E", "A+B", "C+D+E", "All"),
                         k: int = 2, seed: int = 0,
                         eps: float | None = None, min_pts: int = DBSCAN_DEFAULT_MIN_PTS,
                         standardize: bool = True) -> dict[str, float | None]:
    """Normalized silhouette per metadata feature set, labels unused.

    ``items`` pairs ArticleMetadata with an ignored label (the pool is fit
    unlabeled). Features are standardized by default since all three
    algorithms are scale-sensitive.
    """
    from .classify import ablation_fields

    if algorithm not in CLUSTER_ALGORITHMS:
        raise DataError(f"unknown clustering algorithm {algorithm!r}")
    results: dict[str, float | None] = {}
    for set_name in ablation_sets:
        fields = ablation_fields(set_name)
        config = FeatureConfig(mode="metadata", metadata_fields=fields)
        X = np.vstack([metadata_values(meta, config.metadata_fields)
                       for meta, _ in items])
        if np.all(X == X[0]):
            raise DataError("degenerate input: all feature vectors identical")
        if standardize:
            X = apply_scaler(X, fit_scaler(X))
        if algorithm == "kmeans":
            result = kmeans(X, k=k, seed=seed)
        elif algorithm == "agglomerative":
            result = agglomerative(X, k=k)
        else:
            result = dbscan(X, eps=eps if eps is not None else default_eps(X, seed=seed),
                            min_pts=min_pts)
        results[set_name] = result.silhouette_pct
    return results
