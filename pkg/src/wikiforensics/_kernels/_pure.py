"""Pure-Python / numpy twin of the compiled kernels.

Every function here has a byte-compatible signature in ``_ext`` (the Cython
build). Keep the two in lockstep; the parity tests compare them on random
inputs.
"""

from __future__ import annotations

import numpy as np

ID_DTYPE = np.int32
_ID_BYTES = 4


def mtld_factor_count(ids: np.ndarray, threshold: float) -> float:
    """Count diversity factors in one direction of an MTLD scan.

    Walks the token-id sequence keeping a running type/token window; each
    time the window's type-token ratio drops strictly below ``threshold``
    one full factor is closed and the window resets. A trailing partial
    window contributes ``(1 - ttr) / (1 - threshold)``.
    """
    factors = 0.0
    window_tokens = 0
    window_types = 0
    seen: set[int] = set()
    ttr = 1.0
    for tok in ids:
        window_tokens += 1
        if tok not in seen:
            seen.add(tok)
            window_types += 1
        ttr = window_types / window_tokens
        if ttr < threshold:
            factors += 1.0
            window_tokens = 0
            window_types = 0
            seen.clear()
            ttr = 1.0
    if window_tokens > 0:
        factors += (1.0 - ttr) / (1.0 - threshold)
    return factors


def count_ngram_keys(ids: np.ndarray, starts: np.ndarray, n: int) -> dict[bytes, int]:
    """Exact n-gram counts keyed by the packed little-endian id bytes.

    ``starts`` delimits articles: article *j* spans ``ids[starts[j]:starts[j+1]]``
    and windows never cross the boundary.
    """
    ids = np.ascontiguousarray(ids, dtype=ID_DTYPE)
    raw = ids.tobytes()
    counts: dict[bytes, int] = {}
    width = _ID_BYTES * n
    for j in range(len(starts) - 1):
        lo, hi = int(starts[j]), int(starts[j + 1])
        base = lo * _ID_BYTES
        for i in range(hi - lo - n + 1):
            key = raw[base + i * _ID_BYTES: base + i * _ID_BYTES + width]
            counts[key] = counts.get(key, 0) + 1
    return counts


def best_split_gini(values: np.ndarray, labels: np.ndarray, min_leaf: int) -> tuple[int, float]:
    """Best binary split of a sorted column by weighted Gini impurity.

    ``values`` must be ascending and ``labels`` (0/1) aligned with it. The
    split sends ``x <= values[i]`` left. Returns ``(i, impurity)`` of the
    first strictly-best split, or ``(-1, inf)`` when no valid split exists.
    """
    n = len(values)
    total1 = int(labels.sum())
    best_i = -1
    best = np.inf
    left1 = 0
    for i in range(n - 1):
        left1 += int(labels[i])
        nl = i + 1
        nr = n - nl
        if nl < min_leaf or nr < min_leaf:
            continue
        if values[i] == values[i + 1]:
            continue
        p1l = left1 / nl
        p1r = (total1 - left1) / nr
        gl = 1.0 - p1l * p1l - (1.0 - p1l) * (1.0 - p1l)
        gr = 1.0 - p1r * p1r - (1.0 - p1r) * (1.0 - p1r)
        w = (nl * gl + nr * gr) / n
        if w < best:
            best = w
            best_i = i
    return best_i, best


def best_split_gain(values: np.ndarray, grad: np.ndarray, hess: np.ndarray,
                    lam: float, min_leaf: int) -> tuple[int, float]:
    """Best split of a sorted column by second-order boosting gain.

    Gain is the unhalved score improvement
    ``GL^2/(HL+lam) + GR^2/(HR+lam) - G^2/(H+lam)``; the caller applies the
    1/2 factor and any complexity penalty. Returns ``(-1, 0.0)`` when no
    valid split improves the score.
    """
    n = len(values)
    g_total = float(grad.sum())
    h_total = float(hess.sum())
    parent = g_total * g_total / (h_total + lam)
    best_i = -1
    best = 0.0
    gl = 0.0
    hl = 0.0
    for i in range(n - 1):
        gl += float(grad[i])
        hl += float(hess[i])
        nl = i + 1
        if nl < min_leaf or n - nl < min_leaf:
            continue
        if values[i] == values[i + 1]:
            continue
        gr = g_total - gl
        hr = h_total - hl
        gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
        if gain > best:
            best = gain
            best_i = i
    return best_i, best


def cluster_distance_sums(points: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Summed Euclidean distance from every point to every cluster.

    Returns an ``(n, k)`` matrix; entry ``(i, c)`` includes the zero
    self-distance when point ``i`` belongs to cluster ``c``. Points labeled
    ``< 0`` (noise) contribute to no column but still get a row.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    onehot = np.zeros((n, k))
    valid = labels >= 0
    onehot[np.arange(n)[valid], labels[valid]] = 1.0
    sums = np.zeros((n, k))
    sq = np.einsum("ij,ij->i", points, points)
    chunk = max(1, min(n, 2_000_000 // max(n, 1) + 1))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        d2 = sq[lo:hi, None] + sq[None, :] - 2.0 * points[lo:hi] @ points.T
        np.maximum(d2, 0.0, out=d2)
        # the expansion leaves ~1e-16 residue on the diagonal; sqrt would
        # inflate it to 1e-8 self-distances
        d2[np.arange(hi - lo), np.arange(lo, hi)] = 0.0
        sums[lo:hi] = np.sqrt(d2) @ onehot
    return sums
