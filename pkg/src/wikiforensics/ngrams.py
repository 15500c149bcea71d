"""Top-K n-gram profiling and decay-anomaly diagnosis.

Counts are exact (no sketching) and grams never span article boundaries.
Organic corpora show top-1 counts shrinking steeply as n grows; a template
that repeats verbatim across many articles keeps the counts nearly flat,
which the decay diagnosis flags via the geometric mean of consecutive
top-1 ratios over a band of n values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DataError
from .textprep import TokenizedArticle

DEFAULT_ANOMALY_BAND = (5, 15)
DEFAULT_ANOMALY_THRESHOLD = 1.2

# ASCII words typical of chart/image wikitext blocks that leak into parsed
# article text (axis/timeline parameters and color names).
MARKUP_LEXICON = frozenset({
    "alignbars", "bar", "barincrement", "black", "bottom", "caption",
    "color", "colors", "dateformat", "fontsize", "format", "from", "gray",
    "green", "gridcolor", "height", "id", "imagesize", "increment",
    "justify", "left", "legend", "orientation", "period", "plotarea",
    "plotdata", "px", "red", "right", "scalemajor", "start", "text",
    "textcolor", "till", "timeaxis", "top", "unit", "value", "vertical",
    "width", "yyyy",
})


class _CorpusIds:
    """Token-id view of a corpus: one flat id array plus article offsets."""

    def __init__(self, articles: Iterable[TokenizedArticle]):
        vocab: dict[str, int] = {}
        ids: list[int] = []
        starts = [0]
        for article in articles:
            for tok in article.tokens:
                ids.append(vocab.setdefault(tok, len(vocab)))
            starts.append(len(ids))
        self.ids = np.asarray(ids, dtype=_kernels.ID_DTYPE)
        self.starts = np.asarray(starts, dtype=np.int64)
        self.id_to_token = list(vocab.keys())

    def decode(self, key: bytes) -> tuple[str, ...]:
        gram_ids = np.frombuffer(key, dtype=_kernels.ID_DTYPE)
        return tuple(self.id_to_token[i] for i in gram_ids)


def _count_keys(corpus: _CorpusIds, n: int) -> dict[bytes, int]:
    return _kernels.count_ngram_keys(corpus.ids, corpus.starts, n)


def _select_top(corpus: _CorpusIds, counts: dict[bytes, int], k: int) -> list[tuple[tuple[str, ...], int]]:
    decoded = [(corpus.decode(key), c) for key, c in counts.items()]
    decoded.sort(key=lambda item: (-item[1], item[0]))
    return decoded[:k]


def count_ngrams(articles: Iterable[TokenizedArticle], n: int, k: int,
                 two_pass: bool = False) -> list[tuple[tuple[str, ...], int]]:
    """The k most frequent token n-grams with exact counts.

    Ties break by lexicographic gram order. ``two_pass`` trades time for
    memory: a first pass counts 64-bit gram fingerprints, a second counts
    real grams only for fingerprints that reach the top-k cut. A
    fingerprint's count upper-bounds every gram hashing to it, so any gram
    the candidate set misses counts strictly below the cut; when the k-th
    best candidate falls below the cut the result cannot be certified and
    the corpus is recounted in full.
    """
    if n < 1 or k < 1:
        raise DataError("n and k must be >= 1")
    corpus = _CorpusIds(articles)
    if not two_pass:
        return _select_top(corpus, _count_keys(corpus, n), k)

    fp_counts: dict[int, int] = {}
    for lo, hi in zip(corpus.starts[:-1], corpus.starts[1:]):
        seg = corpus.ids[lo:hi]
        for i in range(len(seg) - n + 1):
            fp = hash(seg[i:i + n].tobytes())
            fp_counts[fp] = fp_counts.get(fp, 0) + 1
    if not fp_counts:
        return []
    cut = sorted(fp_counts.values(), reverse=True)[:k][-1]
    keep = {fp for fp, c in fp_counts.items() if c >= cut}
    counts: dict[bytes, int] = {}
    for lo, hi in zip(corpus.starts[:-1], corpus.starts[1:]):
        seg = corpus.ids[lo:hi]
        for i in range(len(seg) - n + 1):
            key = seg[i:i + n].tobytes()
            if hash(key) in keep:
                counts[key] = counts.get(key, 0) + 1
    top = _select_top(corpus, counts, k)
    kept_everything = len(keep) == len(fp_counts)
    certified = kept_everything or (len(top) >= k and top[-1][1] >= cut)
    if not certified:
        return _select_top(corpus, _count_keys(corpus, n), k)
    return top


@dataclass
class NGramProfile:
    n_values: list[int]
    k: int
    top_k: dict[int, list[tuple[tuple[str, ...], int]]] = field(default_factory=dict)
    top1_series: list[tuple[int, int]] = field(default_factory=list)

    def top1_count(self, n: int) -> int | None:
        for nn, count in self.top1_series:
            if nn == n:
                return count
        return None


def profile_ngrams(articles: Iterable[TokenizedArticle],
                   n_values: Sequence[int] = (1, 2, 3, 5, 10, 50),
                   k: int = 10) -> NGramProfile:
    """Top-k tables for each requested n over one corpus pass."""
    corpus = _CorpusIds(articles)
    profile = NGramProfile(n_values=list(n_values), k=k)
    for n in n_values:
        top = _select_top(corpus, _count_keys(corpus, n), k)
        profile.top_k[n] = top
        if top:
            profile.top1_series.append((n, top[0][1]))
    return profile


def top1_decay(articles: Iterable[TokenizedArticle],
               n_max: int = 50) -> list[tuple[int, int, float]]:
    """Top-1 count and its log10 for every n in 1..n_max.

    Sizes with no gram at all (every article shorter than n) are absent
    from the series rather than reported as zero.
    """
    if n_max < 2:
        raise DataError("n_max must be >= 2")
    corpus = _CorpusIds(articles)
    series = []
    for n in range(1, n_max + 1):
        counts = _count_keys(corpus, n)
        if not counts:
            continue
        top = max(counts.values())
        series.append((n, top, math.log10(top)))
    return series


@dataclass
class DecayDiagnosis:
    ratios: list[tuple[int, float]]
    geometric_mean: float
    anomaly_flag: bool
    anomaly_band: tuple[int, int]
    threshold: float


def diagnose_decay(series: Sequence[tuple[int, int, float]] | Sequence[tuple[int, int]],
                   band: tuple[int, int] = DEFAULT_ANOMALY_BAND,
                   threshold: float = DEFAULT_ANOMALY_THRESHOLD) -> DecayDiagnosis:
    """Flag near-flat top-1 decay over ``band`` as template suspicion.

    The flag raises when the geometric mean of consecutive count ratios
    top1[n]/top1[n+1] across the band falls below ``threshold``.
    """
    lo, hi = band
    if lo >= hi:
        raise DataError("anomaly band must satisfy lo < hi")
    counts = {row[0]: row[1] for row in series}
    for n in range(lo, hi + 2):
        if n not in counts or counts[n] <= 0:
            raise DataError(f"top-1 series does not cover the band: missing n={n}")
    ratios = [(n, counts[n] / counts[n + 1]) for n in range(lo, hi + 1)]
    log_mean = sum(math.log(r) for _, r in ratios) / len(ratios)
    geo = math.exp(log_mean)
    return DecayDiagnosis(
        ratios=ratios,
        geometric_mean=geo,
        anomaly_flag=geo < threshold,
        anomaly_band=(lo, hi),
        threshold=threshold,
    )


def detect_markup_leak(articles: Iterable[TokenizedArticle],
                       share_threshold: float = 0.30) -> int:
    """Count articles whose tokens are dominated by markup-lexicon words."""
    leaked = 0
    for article in articles:
        if not article.tokens:
            continue
        hits = sum(1 for t in article.tokens if t.isascii() and t.lower() in MARKUP_LEXICON)
        if hits / len(article.tokens) > share_threshold:
            leaked += 1
    return leaked
