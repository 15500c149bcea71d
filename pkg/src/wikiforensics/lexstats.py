"""Corpus density statistics and lexical richness/diversity metrics.

Covers per-corpus byte/character/token summaries, per-article length
series with mean lines, the classic type-token family (TTR, RTTR, CTTR),
and the bidirectional factor-based diversity measure MTLD with its 0.72
factor threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DataError
from .ingest import ArticleMetadata
from .textprep import TokenizedArticle

MTLD_DEFAULT_THRESHOLD = 0.72


@dataclass
class FieldSummary:
    total: int = 0
    minimum: int | None = None
    maximum: int | None = None
    mean: float = 0.0

    def observe(self, value: int) -> None:
        self.total += value
        if self.minimum is None or value < self.minimum:
            self.minimum = value
        if self.maximum is None or value > self.maximum:
            self.maximum = value


@dataclass
class CorpusSummary:
    article_count: int
    bytes: FieldSummary
    characters: FieldSummary
    tokens: FieldSummary

    def as_dict(self) -> dict:
        out = {"article_count": self.article_count}
        for name in ("bytes", "characters", "tokens"):
            fs: FieldSummary = getattr(self, name)
            out[name] = {"total": fs.total, "min": fs.minimum,
                         "max": fs.maximum, "mean": fs.mean}
        return out


def summarize_corpus(
    articles: Iterable[tuple[TokenizedArticle, ArticleMetadata | None]],
) -> CorpusSummary:
    """Exact totals and min/max/mean of bytes, characters, and tokens.

    Bytes come from fetched metadata (0 when absent); characters and tokens
    from the extracted text itself.
    """
    summary = CorpusSummary(0, FieldSummary(), FieldSummary(), FieldSummary())
    for tokenized, meta in articles:
        summary.article_count += 1
        summary.bytes.observe(meta.total_bytes if meta else 0)
        summary.characters.observe(tokenized.char_count)
        summary.tokens.observe(tokenized.token_count)
    if summary.article_count == 0:
        raise DataError("cannot summarize an empty corpus")
    for fs in (summary.bytes, summary.characters, summary.tokens):
        fs.mean = fs.total / summary.article_count
    return summary


@dataclass
class LengthDistribution:
    """Per-article (page_id, tokens, chars) rows plus the mean lines."""

    rows: list[tuple[int, int, int]]
    mean_tokens: float
    mean_chars: float


def length_distribution(articles: Iterable[TokenizedArticle]) -> LengthDistribution:
    rows = [(a.page_id, a.token_count, a.char_count) for a in articles]
    if not rows:
        raise DataError("cannot compute a length distribution for an empty corpus")
    n = len(rows)
    return LengthDistribution(
        rows=rows,
        mean_tokens=sum(r[1] for r in rows) / n,
        mean_chars=sum(r[2] for r in rows) / n,
    )


def ttr(total_tokens: int, unique_tokens: int) -> float:
    """Type-token ratio V/N."""
    _check_nv(total_tokens, unique_tokens)
    return unique_tokens / total_tokens


def rttr(total_tokens: int, unique_tokens: int) -> float:
    """Root type-token ratio V/sqrt(N)."""
    _check_nv(total_tokens, unique_tokens)
    return unique_tokens / math.sqrt(total_tokens)


def cttr(total_tokens: int, unique_tokens: int) -> float:
    """Corrected type-token ratio V/sqrt(2N)."""
    _check_nv(total_tokens, unique_tokens)
    return unique_tokens / math.sqrt(2.0 * total_tokens)


def _check_nv(n: int, v: int) -> None:
    if n < 1:
        raise DataError("total token count must be >= 1")
    if not 1 <= v <= n:
        raise DataError(f"unique token count must be in [1, {n}], got {v}")


def _token_ids(tokens: Sequence[str]) -> np.ndarray:
    ids = {}
    out = np.empty(len(tokens), dtype=_kernels.ID_DTYPE)
    for i, tok in enumerate(tokens):
        out[i] = ids.setdefault(tok, len(ids))
    return out


def mtld(tokens: Sequence[str], threshold: float = MTLD_DEFAULT_THRESHOLD) -> float | None:
    """Bidirectional mean length of diversity factors.

    Runs the factor scan forward and over the reversed sequence and averages
    the two ``N / factors`` lengths. Returns None (undefined) when either
    direction closes zero factors, which happens for short all-distinct
    sequences; callers must not coerce that to 0 or infinity.
    """
    if len(tokens) == 0:
        raise DataError("MTLD needs a non-empty token sequence")
    if not 0.0 < threshold < 1.0:
        raise DataError("MTLD factor threshold must be in (0, 1)")
    ids = _token_ids(tokens)
    n = len(ids)
    scores = []
    for direction in (ids, ids[::-1]):
        factors = _kernels.mtld_factor_count(np.ascontiguousarray(direction), threshold)
        if factors == 0.0:
            return None
        scores.append(n / factors)
    return (scores[0] + scores[1]) / 2.0


@dataclass
class LexicalDiversityReport:
    total_tokens: int
    unique_tokens: int
    ttr: float
    rttr: float
    cttr: float
    mtld: float | None
    mtld_undefined: bool
    mtld_factor_threshold: float = MTLD_DEFAULT_THRESHOLD

    def as_dict(self) -> dict:
        return {
            "total_tokens": self.total_tokens,
            "unique_tokens": self.unique_tokens,
            "ttr": self.ttr,
            "rttr": self.rttr,
            "cttr": self.cttr,
            "mtld": self.mtld,
            "mtld_undefined": self.mtld_undefined,
            "mtld_factor_threshold": self.mtld_factor_threshold,
        }


def lexical_diversity(tokens: Sequence[str],
                      threshold: float = MTLD_DEFAULT_THRESHOLD) -> LexicalDiversityReport:
    """Full richness/diversity report for one token sequence (or corpus)."""
    if len(tokens) == 0:
        raise DataError("cannot measure diversity of an empty token sequence")
    n = len(tokens)
    v = len(set(tokens))
    score = mtld(tokens, threshold)
    return LexicalDiversityReport(
        total_tokens=n,
        unique_tokens=v,
        ttr=ttr(n, v),
        rttr=rttr(n, v),
        cttr=cttr(n, v),
        mtld=score,
        mtld_undefined=score is None,
        mtld_factor_threshold=threshold,
    )
