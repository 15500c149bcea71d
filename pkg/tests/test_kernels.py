"""Parity between the compiled kernels and the pure-Python twin."""

import numpy as np
import pytest

from wikiforensics._kernels import HAVE_EXT, _pure

if HAVE_EXT:
    from wikiforensics._kernels import _ext
else:  # pragma: no cover - exercised only in pure-only builds
    _ext = None

needs_ext = pytest.mark.skipif(not HAVE_EXT, reason="compiled kernels not built")


def random_ids(rng, n, vocab):
    return rng.integers(0, vocab, size=n).astype(np.int32)


@needs_ext
def test_mtld_factor_count_parity():
    rng = np.random.default_rng(401)
    for _ in range(50):
        ids = random_ids(rng, int(rng.integers(1, 400)), int(rng.integers(2, 30)))
        threshold = float(rng.uniform(0.3, 0.9))
        assert _ext.mtld_factor_count(ids, threshold) == \
            _pure.mtld_factor_count(ids, threshold)


@needs_ext
def test_count_ngram_keys_parity():
    rng = np.random.default_rng(409)
    for _ in range(20):
        n_articles = int(rng.integers(1, 8))
        lengths = rng.integers(0, 60, size=n_articles)
        ids = random_ids(rng, int(lengths.sum()), 6)
        starts = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        for n in (1, 2, 3, 5):
            assert _ext.count_ngram_keys(ids, starts, n) == \
                _pure.count_ngram_keys(ids, starts, n)


@needs_ext
def test_best_split_gini_parity():
    rng = np.random.default_rng(419)
    for _ in range(50):
        n = int(rng.integers(2, 200))
        values = np.sort(rng.normal(size=n))
        if rng.random() < 0.3:  # introduce duplicate feature values
            values = np.sort(np.round(values, 1))
        labels = rng.integers(0, 2, size=n).astype(np.int8)
        min_leaf = int(rng.integers(1, 4))
        ext_i, ext_g = _ext.best_split_gini(values, labels, min_leaf)
        pure_i, pure_g = _pure.best_split_gini(values, labels, min_leaf)
        assert ext_i == pure_i
        assert ext_g == pytest.approx(pure_g, rel=1e-12) or \
            (np.isinf(ext_g) and np.isinf(pure_g))


@needs_ext
def test_best_split_gain_parity():
    rng = np.random.default_rng(421)
    for _ in range(50):
        n = int(rng.integers(2, 200))
        values = np.sort(rng.normal(size=n))
        grad = rng.normal(size=n)
        hess = rng.uniform(0.01, 0.25, size=n)
        ext_i, ext_gain = _ext.best_split_gain(values, grad, hess, 1.0, 1)
        pure_i, pure_gain = _pure.best_split_gain(values, grad, hess, 1.0, 1)
        assert ext_i == pure_i
        assert ext_gain == pytest.approx(pure_gain, rel=1e-9, abs=1e-12)


@needs_ext
def test_cluster_distance_sums_parity():
    rng = np.random.default_rng(431)
    for _ in range(10):
        n = int(rng.integers(2, 120))
        d = int(rng.integers(1, 8))
        k = int(rng.integers(1, 5))
        X = rng.normal(size=(n, d))
        labels = rng.integers(-1, k, size=n).astype(np.int32)
        ext = _ext.cluster_distance_sums(X, labels, k)
        pure = _pure.cluster_distance_sums(X, labels, k)
        assert ext == pytest.approx(pure, rel=1e-9, abs=1e-9)


def test_pure_env_override(monkeypatch):
    import importlib

    import wikiforensics._kernels as kernels

    monkeypatch.setenv("WIKIFORENSICS_PURE", "1")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.HAVE_EXT is False
        assert reloaded.impl is _pure
    finally:
        monkeypatch.delenv("WIKIFORENSICS_PURE")
        importlib.reload(kernels)
