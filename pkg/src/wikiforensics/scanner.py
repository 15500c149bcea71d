"""Single-article detection: fuzzy title search, metadata fetch, verdict.

The scanner wraps a trained model behind a human-facing flow: resolve a
title (trigram-similarity search over an index built from the corpus),
fetch its metadata, assemble features exactly as the model was trained,
and return a labeled verdict with the score and the metadata echoed back.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable
from urllib.parse import quote

from .classify import TrainedModel
from .errors import ConfigError, DataError, FetchError
from .features import (HashedProvider, PageVectorTable, WordVectorTable,
                       embed_article, metadata_values)
from .ingest import ArticleMetadata, XToolsClient, load_corpus
from .rules import LABEL_HUMAN, LABEL_TEMPLATE
from .textprep import tokenize_article

import numpy as np

_SENTENCE_END = re.compile(r"(?<=[.!?؟۔])\s+")


def _trigrams(text: str) -> frozenset[str]:
    if len(text) < 3:
        return frozenset({text}) if text else frozenset()
    return frozenset(text[i:i + 3] for i in range(len(text) - 2))


class TitleIndex:
    """In-memory fuzzy index; similarity is trigram-set Jaccard."""

    def __init__(self, titles: Iterable[str]):
        self.titles: list[str] = []
        self._grams: list[frozenset[str]] = []
        seen = set()
        for title in titles:
            if title in seen:
                continue
            seen.add(title)
            self.titles.append(title)
            self._grams.append(_trigrams(title))

    def __len__(self) -> int:
        return len(self.titles)

    def __contains__(self, title: str) -> bool:
        return title in set(self.titles)

    def search(self, query: str, limit: int = 10) -> list[tuple[str, float]]:
        if not query:
            raise DataError("search query must be non-empty")
        q = _trigrams(query)
        scored = []
        for pos, (title, grams) in enumerate(zip(self.titles, self._grams)):
            inter = len(q & grams)
            if inter == 0:
                continue
            union = len(q | grams)
            scored.append((-inter / union, pos, title))
        scored.sort()
        return [(title, -neg) for neg, _, title in scored[:limit]]


def remote_opensearch(project: str, query: str, limit: int = 10,
                      timeout: float = 15.0) -> list[tuple[str, float]]:
    """Title suggestions from the wiki's opensearch endpoint.

    Scores are synthesized from rank (1.0, 0.5, 0.33, ...) since the remote
    protocol returns an ordered list without scores.
    """
    import requests

    url = f"https://{project}/w/api.php"
    params = {"action": "opensearch", "search": query, "limit": limit,
              "format": "json"}
    try:
        resp = requests.get(url, params=params, timeout=timeout)
    except requests.RequestException as exc:
        raise FetchError(f"remote title search failed: {exc}") from exc
    if resp.status_code != 200:
        raise FetchError(f"remote title search returned HTTP {resp.status_code}")
    try:
        titles = resp.json()[1]
    except (ValueError, IndexError) as exc:
        raise FetchError("malformed opensearch response") from exc
    return [(title, 1.0 / rank) for rank, title in enumerate(titles, start=1)]


def search_titles(index: TitleIndex, query: str, limit: int = 10,
                  remote_project: str | None = None) -> list[tuple[str, float]]:
    """Rank titles by trigram similarity; an empty local index falls
    through to the remote endpoint when one is configured."""
    if len(index) == 0:
        if remote_project:
            return remote_opensearch(remote_project, query, limit)
        raise DataError("title index is empty and no remote search is configured")
    return index.search(query, limit)


@dataclass
class ScanVerdict:
    title: str
    page_url: str
    metadata: ArticleMetadata
    label: str
    score: float
    model_id: str
    summary: str = ""
    summary_source: str = "stored-text"

    def to_json_dict(self) -> dict:
        return {
            "title": self.title,
            "page_url": self.page_url,
            "metadata": self.metadata.to_json_dict(),
            "label": self.label,
            "score": self.score,
            "model_id": self.model_id,
            "summary": self.summary,
            "summary_source": self.summary_source,
        }


def best_effort_summary(text: str, sentences: int = 2) -> str:
    """First couple of sentences of the stored text; display-only."""
    body = " ".join(text.split())
    if not body:
        return ""
    parts = _SENTENCE_END.split(body)
    return " ".join(parts[:sentences]).strip()


class Scanner:
    """Binds a trained model, a metadata client, and the article corpus."""

    def __init__(self, model: TrainedModel, metadata_client: XToolsClient,
                 project: str, corpus_path=None, word_vectors_path=None,
                 page_vectors_path=None, remote_search: bool = False):
        if model.model_id is None:
            raise ConfigError("scanner needs a persisted model with a model_id")
        self.model = model
        self.client = metadata_client
        self.project = project
        self.remote_search_project = project if remote_search else None
        self.texts: dict[str, str] = {}
        self.page_ids: dict[str, int] = {}
        titles: list[str] = []
        if corpus_path is not None:
            for record in load_corpus(corpus_path):
                titles.append(record.title)
                self.texts[record.title] = record.text
                self.page_ids[record.title] = record.page_id
        self.index = TitleIndex(titles)
        self._provider = self._load_provider(word_vectors_path, page_vectors_path)

    def _load_provider(self, word_vectors_path, page_vectors_path):
        config = self.model.feature_config
        if config.mode == "metadata":
            return None
        name = config.embedding_provider
        if name == "static-300":
            if not word_vectors_path:
                raise ConfigError("model needs static word vectors; none configured")
            return WordVectorTable.load(word_vectors_path)
        if name == "contextual-768":
            if not page_vectors_path:
                raise ConfigError("model needs contextual page vectors; none configured")
            return PageVectorTable.load(page_vectors_path)
        if name == "hashed-test":
            return HashedProvider(config.embedding_dim or 300)
        raise ConfigError(f"model names unknown provider {name!r}")

    def page_url(self, title: str) -> str:
        return f"https://{self.project}/wiki/{quote(title, safe='')}"

    def fetch_metadata(self, title: str) -> ArticleMetadata:
        return self.client.fetch(self.project, title)

    def _features(self, title: str, meta: ArticleMetadata) -> np.ndarray:
        config = self.model.feature_config
        parts = []
        if config.mode in ("embeddings", "both"):
            text = self.texts.get(title)
            if text is None:
                raise DataError(f"no stored text for {title!r}; embeddings unavailable")
            from .ingest import ArticleRecord

            record = ArticleRecord(page_id=self.page_ids.get(title, 1),
                                   title=title, text=text)
            tokenized = tokenize_article(record)
            parts.append(embed_article(tokenized, self._provider).values)
        if config.mode in ("metadata", "both"):
            parts.append(metadata_values(meta, config.metadata_fields))
        return np.concatenate(parts)

    def scan(self, title: str) -> ScanVerdict:
        """Fetch, featurize, predict; deterministic for fixed model + metadata."""
        meta = self.fetch_metadata(title)
        features = self._features(title, meta)
        labels, scores = self.model.predict(features.reshape(1, -1))
        label = LABEL_TEMPLATE if labels[0] == 1 else LABEL_HUMAN
        return ScanVerdict(
            title=title,
            page_url=self.page_url(title),
            metadata=meta,
            label=label,
            score=float(scores[0]),
            model_id=self.model.model_id,
            summary=best_effort_summary(self.texts.get(title, "")),
        )

    def search(self, query: str, limit: int = 10) -> list[tuple[str, float]]:
        return search_titles(self.index, query, limit,
                             remote_project=self.remote_search_project)


@dataclass
class ScannerConfig:
    """File-backed configuration for the scan/search/serve commands."""

    model_path: Path
    corpus_path: Path | None = None
    fixture_dir: Path | None = None
    project: str = "arz.wikipedia.org"
    xtools_base_url: str | None = None
    metadata_source: str = "fixture-dir"
    word_vectors_path: Path | None = None
    page_vectors_path: Path | None = None
    port: int = 8601
    fetch_concurrency: int = 4
    remote_search: bool = False

    @classmethod
    def from_file(cls, path) -> "ScannerConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"scanner config not found: {path}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        return cls.from_dict(doc, base=path.parent)

    @classmethod
    def from_dict(cls, doc: dict, base) -> "ScannerConfig":
        if "model_path" not in doc:
            raise ConfigError("scanner config must set model_path")
        base = Path(base)

        def resolve(key):
            value = doc.get(key)
            return (base / value).resolve() if value else None

        return cls(
            model_path=(base / doc["model_path"]).resolve(),
            corpus_path=resolve("corpus_path"),
            fixture_dir=resolve("fixture_dir"),
            project=doc.get("project", "arz.wikipedia.org"),
            xtools_base_url=doc.get("xtools_base_url"),
            metadata_source=doc.get("metadata_source", "fixture-dir"),
            word_vectors_path=resolve("word_vectors_path"),
            page_vectors_path=resolve("page_vectors_path"),
            port=int(doc.get("port", 8601)),
            fetch_concurrency=int(doc.get("fetch_concurrency", 4)),
            remote_search=bool(doc.get("remote_search", False)),
        )


def build_scanner(config: ScannerConfig) -> Scanner:
    from .classify import load_model

    model = load_model(config.model_path)
    client = XToolsClient(
        base_url=config.xtools_base_url,
        fixture_dir=config.fixture_dir,
        source=config.metadata_source,
    )
    return Scanner(
        model=model,
        metadata_client=client,
        project=config.project,
        corpus_path=config.corpus_path,
        word_vectors_path=config.word_vectors_path,
        page_vectors_path=config.page_vectors_path,
        remote_search=config.remote_search,
    )
