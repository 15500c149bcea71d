"""Model-input assembly: embeddings, metadata columns, or both.

Embedding vectors are ingested from files, never computed by running a
language model here: a word-vector table serves the static provider (mean
of per-token vectors), a page-vector table serves the contextual provider
(one lookup per article), and a deterministic feature-hashing provider
exists for tests and benchmarks. Metadata columns are the five article
counters, always concatenated in A..E order:

    A total_edits, B total_editors, C total_bytes,
    D total_characters, E total_words
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, DataError
from .ingest import ArticleMetadata
from .textprep import TokenizedArticle

logger = logging.getLogger(__name__)

METADATA_FIELD_CODES = "ABCDE"
_FIELD_ATTRS = {
    "A": "total_edits",
    "B": "total_editors",
    "C": "total_bytes",
    "D": "total_characters",
    "E": "total_words",
}
MODES = ("embeddings", "metadata", "both")
PROVIDERS = ("static-300", "contextual-768", "hashed-test")


@dataclass
class FeatureConfig:
    mode: str = "metadata"
    metadata_fields: str = METADATA_FIELD_CODES
    embedding_provider: str | None = None
    embedding_dim: int | None = None
    standardize: bool | None = None  # None = model-type default

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown feature mode: {self.mode!r}")
        fields = "".join(sorted(set(self.metadata_fields.upper())))
        if any(c not in METADATA_FIELD_CODES for c in fields):
            raise ConfigError(f"metadata fields must be drawn from {METADATA_FIELD_CODES}")
        self.metadata_fields = fields
        if self.mode in ("metadata", "both") and not self.metadata_fields:
            raise ConfigError("metadata mode requires at least one metadata field")
        if self.mode in ("embeddings", "both"):
            if self.embedding_provider not in PROVIDERS:
                raise ConfigError("embedding mode requires a provider "
                                  f"from {PROVIDERS}")

    @property
    def field_attrs(self) -> list[str]:
        return [_FIELD_ATTRS[c] for c in self.metadata_fields]

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "metadata_fields": self.metadata_fields,
            "embedding_provider": self.embedding_provider,
            "embedding_dim": self.embedding_dim,
            "standardize": self.standardize,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FeatureConfig":
        return cls(
            mode=doc["mode"],
            metadata_fields=doc.get("metadata_fields", ""),
            embedding_provider=doc.get("embedding_provider"),
            embedding_dim=doc.get("embedding_dim"),
            standardize=doc.get("standardize"),
        )


@dataclass
class FeatureVector:
    page_id: int
    values: np.ndarray
    all_oov: bool = False

    @property
    def dim(self) -> int:
        return len(self.values)


class WordVectorTable:
    """Static per-token vectors: ``token v1 .. vD`` lines, space separated."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.vectors = vectors
        self.dim = dim

    @classmethod
    def load(cls, path) -> "WordVectorTable":
        path = Path(path)
        vectors: dict[str, np.ndarray] = {}
        dim = None
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                parts = line.rstrip("\n").split(" ")
                if len(parts) < 2:
                    continue
                token, comps = parts[0], parts[1:]
                if dim is None:
                    dim = len(comps)
                elif len(comps) != dim:
                    raise DataError(f"{path}:{line_no}: expected {dim} components, "
                                    f"got {len(comps)}")
                vectors[token] = np.array([float(c) for c in comps])
        if dim is None:
            raise DataError(f"word-vector table {path} is empty")
        return cls(vectors, dim)

    def embed(self, tokens: Sequence[str]) -> tuple[np.ndarray, bool]:
        if not tokens:
            raise DataError("cannot embed an empty token list")
        hits = [self.vectors[t] for t in tokens if t in self.vectors]
        if not hits:
            return np.zeros(self.dim), True
        return np.mean(hits, axis=0), False


class PageVectorTable:
    """Contextual per-article vectors: ``page_id v1 .. vD`` lines."""

    def __init__(self, vectors: dict[int, np.ndarray], dim: int):
        self.vectors = vectors
        self.dim = dim

    @classmethod
    def load(cls, path) -> "PageVectorTable":
        path = Path(path)
        vectors: dict[int, np.ndarray] = {}
        dim = None
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                parts = line.split()
                if len(parts) < 2:
                    continue
                if dim is None:
                    dim = len(parts) - 1
                elif len(parts) - 1 != dim:
                    raise DataError(f"{path}:{line_no}: expected {dim} components")
                vectors[int(parts[0])] = np.array([float(c) for c in parts[1:]])
        if dim is None:
            raise DataError(f"page-vector table {path} is empty")
        return cls(vectors, dim)

    def embed(self, page_id: int) -> np.ndarray:
        if page_id not in self.vectors:
            raise DataError(f"no contextual vector for page_id {page_id}")
        return self.vectors[page_id]


class HashedProvider:
    """Deterministic signed bag-of-words feature hashing (test provider).

    Each token maps to one bucket and a +/-1 sign derived from its SHA-256
    digest, so vectors are identical across runs, platforms, and hash-seed
    settings. The signed counts are L2-normalized, keeping the geometry
    about token content rather than article length (a fully cancelled sum
    stays the zero vector).
    """

    def __init__(self, dim: int = 300):
        if dim < 1:
            raise ConfigError("hashed provider dim must be >= 1")
        self.dim = dim

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            raise DataError("cannot embed an empty token list")
        out = np.zeros(self.dim)
        for tok in tokens:
            digest = hashlib.sha256(tok.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:8], "big") % self.dim
            sign = 1.0 if digest[8] % 2 == 0 else -1.0
            out[bucket] += sign
        norm = float(np.linalg.norm(out))
        return out / norm if norm > 0 else out


def make_provider(config: FeatureConfig, word_vectors=None, page_vectors=None):
    """Resolve the provider object a config names, checking dims."""
    name = config.embedding_provider
    if name is None:
        return None
    if name == "static-300":
        if word_vectors is None:
            raise ConfigError("static provider requires a word-vector table")
        return word_vectors
    if name == "contextual-768":
        if page_vectors is None:
            raise ConfigError("contextual provider requires a page-vector table")
        return page_vectors
    if name == "hashed-test":
        return HashedProvider(config.embedding_dim or 300)
    raise ConfigError(f"unknown provider {name!r}")


def embed_article(article: TokenizedArticle, provider) -> FeatureVector:
    """One embedding vector for one article, via whichever provider."""
    if isinstance(provider, PageVectorTable):
        return FeatureVector(article.page_id, provider.embed(article.page_id))
    if isinstance(provider, WordVectorTable):
        values, all_oov = provider.embed(article.tokens)
        return FeatureVector(article.page_id, values, all_oov=all_oov)
    if isinstance(provider, HashedProvider):
        return FeatureVector(article.page_id, provider.embed(article.tokens))
    raise ConfigError(f"unsupported provider object: {type(provider).__name__}")


def metadata_values(meta: ArticleMetadata, fields: str) -> np.ndarray:
    return np.array([float(getattr(meta, _FIELD_ATTRS[c])) for c in fields])


def assemble(items: Iterable[tuple[TokenizedArticle, ArticleMetadata]],
             config: FeatureConfig, provider=None) -> list[FeatureVector]:
    """Build one feature vector per article in input order.

    ``both`` mode concatenates the embedding first, then the metadata
    columns in A..E order. Any article that cannot be resolved aborts with
    the offending page_ids listed.
    """
    if config.mode in ("embeddings", "both") and provider is None:
        provider = make_provider(config)
    out: list[FeatureVector] = []
    failures: list[int] = []
    for tokenized, meta in items:
        try:
            parts = []
            all_oov = False
            if config.mode in ("embeddings", "both"):
                emb = embed_article(tokenized, provider)
                parts.append(emb.values)
                all_oov = emb.all_oov
            if config.mode in ("metadata", "both"):
                parts.append(metadata_values(meta, config.metadata_fields))
            out.append(FeatureVector(tokenized.page_id, np.concatenate(parts),
                                     all_oov=all_oov))
        except DataError:
            failures.append(tokenized.page_id)
    if failures:
        raise DataError(f"could not assemble features for page_ids: {failures}")
    return out


@dataclass
class ScalerParams:
    """Per-dimension z-score parameters, fit on the training split only."""

    mean: np.ndarray
    std: np.ndarray
    constant_dims: list[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist(),
                "constant_dims": self.constant_dims}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ScalerParams":
        return cls(mean=np.array(doc["mean"]), std=np.array(doc["std"]),
                   constant_dims=list(doc.get("constant_dims", [])))


def fit_scaler(matrix: np.ndarray) -> ScalerParams:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise DataError("scaler needs at least 2 training vectors")
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    constant = np.flatnonzero(std == 0.0).tolist()
    if constant:
        logger.warning("scaler: %d constant dimension(s) %s left unscaled",
                       len(constant), constant)
        std = std.copy()
        std[constant] = 1.0
    return ScalerParams(mean=mean, std=std, constant_dims=constant)


def apply_scaler(matrix: np.ndarray, params: ScalerParams) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[-1] != len(params.mean):
        raise DataError(f"scaler expects dim {len(params.mean)}, "
                        f"got {matrix.shape[-1]}")
    return (matrix - params.mean) / params.std


def stack(vectors: Sequence[FeatureVector]) -> np.ndarray:
    """Feature vectors -> (n, d) float64 matrix, preserving order."""
    if not vectors:
        raise DataError("no feature vectors to stack")
    return np.vstack([fv.values for fv in vectors]).astype(np.float64)
