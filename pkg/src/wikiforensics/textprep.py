"""Light text cleanup and tokenization.

Cleanup keeps letters and digits of any script plus everything inside the
Arabic Unicode blocks; every other character becomes a space, whitespace
runs collapse, and the result is trimmed. No stemming, lemmatization, or
orthographic normalization is applied. Articles shorter than a token
threshold (default 50) are discarded during extraction.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator

from .ingest import ArticleRecord

ARABIC_BLOCKS = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)


def _keep(ch: str) -> bool:
    cp = ord(ch)
    for lo, hi in ARABIC_BLOCKS:
        if lo <= cp <= hi:
            return True
    return unicodedata.category(ch)[0] in ("L", "N")


class _CleanTable(dict):
    """str.translate table; decides keep-vs-space per code point, cached."""

    def __missing__(self, cp: int):
        out = cp if _keep(chr(cp)) else " "
        self[cp] = out
        return out


_CLEAN_TABLE = _CleanTable()


def preprocess(text: str) -> str:
    """Replace non-letter, non-digit, non-Arabic-block characters with spaces."""
    return " ".join(text.translate(_CLEAN_TABLE).split())


def tokenize(text: str) -> list[str]:
    """Split preprocessed text on spaces; never yields empty tokens."""
    return text.split()


@dataclass
class TokenizedArticle:
    page_id: int
    tokens: list[str]
    char_count: int

    @property
    def token_count(self) -> int:
        return len(self.tokens)


def tokenize_article(article: ArticleRecord) -> TokenizedArticle:
    cleaned = preprocess(article.text)
    return TokenizedArticle(
        page_id=article.page_id,
        tokens=tokenize(cleaned),
        char_count=len(cleaned),
    )


class ExtractedCorpus:
    """Single-pass extraction stream that counts the articles it drops.

    Iterate to drain; ``discarded_count`` is final once iteration ends.
    """

    def __init__(self, articles: Iterable[ArticleRecord], min_tokens: int = 50):
        if min_tokens < 1:
            raise ValueError("min_tokens must be >= 1")
        self._articles = articles
        self.min_tokens = min_tokens
        self.discarded_count = 0
        self.kept_count = 0

    def __iter__(self) -> Iterator[TokenizedArticle]:
        for article in self._articles:
            tokenized = tokenize_article(article)
            if tokenized.token_count < self.min_tokens:
                self.discarded_count += 1
                continue
            self.kept_count += 1
            yield tokenized


def extract_corpus(articles: Iterable[ArticleRecord], min_tokens: int = 50) -> ExtractedCorpus:
    return ExtractedCorpus(articles, min_tokens=min_tokens)
