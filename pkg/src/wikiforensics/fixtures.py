"""Deterministic synthetic corpus for tests, demos, and the bundled pipeline.

Generates a wiki-like corpus with two planted populations — long-standing,
actively human-edited articles versus young, barely edited, bot-majority
stubs created by the flagged mass-creator accounts — plus boundary cases
that should land uncategorized, short stubs that the token threshold
drops, and a sprinkle of markup-leak articles. Article metadata is
strongly class-separated on every counter so the planted labels are
analytically recoverable from metadata alone.

Run ``python -m wikiforensics.fixtures OUTDIR`` to materialize the bundle
(corpus JSONL, bot registry, articleinfo fixtures, pipeline and scanner
configs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .ingest import (ArticleMetadata, ArticleRecord, fixture_filename,
                     write_corpus)

BOT_NAMES = ["JarBot", "ElphiBot", "GearBot", "SandBot-3", "TidyBot"]
HUMAN_NAMES = [
    "NileScribe", "Raafat", "Ghaly", "HitomiAkane", "Al-Dandoon", "Samira",
    "KarimH", "Moukhtar", "UmAli", "Fikri", "Zainab", "TutDjoser", "Hossam",
    "Aliaa", "Warda", "Nader", "Yousra", "Selim", "Mourad", "Farida",
]
FLAGGED_CREATORS = ("HitomiAkane", "Al-Dandoon")

_ARABIC_LETTERS = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"
_MARKUP_TOKENS = ["imagesize", "width", "height", "plotarea", "left", "right",
                  "top", "bottom", "timeaxis", "orientation", "bar", "color",
                  "textcolor", "fontsize", "gridcolor", "plotdata", "value"]


def _make_vocab(rng: np.random.Generator, size: int = 400) -> list[str]:
    vocab = set()
    while len(vocab) < size:
        length = int(rng.integers(2, 8))
        word = "".join(_ARABIC_LETTERS[i] for i in rng.integers(0, len(_ARABIC_LETTERS), length))
        vocab.add(word)
    return sorted(vocab)


def _random_date(rng: np.random.Generator, start: date, end: date) -> date:
    span = (end - start).days
    return start + timedelta(days=int(rng.integers(0, span + 1)))


def _text(rng: np.random.Generator, vocab: list[str], n_tokens: int,
          decorate: bool = True) -> str:
    words = [vocab[int(i)] for i in rng.integers(0, len(vocab), n_tokens)]
    if decorate and n_tokens > 10:
        words[0] = "«" + words[0] + "»"
        words[int(n_tokens // 2)] += "،"
        words[-1] += "."
    return " ".join(words)


def _top_editors(rng: np.random.Generator, names: list[str],
                 total_edits: int) -> list[tuple[str, int]]:
    if not names:
        return []
    budget = max(len(names), int(total_edits * 0.8))
    budget = min(budget, total_edits) if total_edits > 0 else len(names)
    counts = np.ones(len(names), dtype=int)
    spare = budget - len(names)
    for _ in range(max(0, spare)):
        counts[int(rng.integers(0, len(names)))] += 1
    pairs = list(zip(names, (int(c) for c in counts)))
    pairs.sort(key=lambda p: -p[1])
    return pairs


@dataclass
class FixtureBundle:
    records: list[ArticleRecord]
    bot_names: list[str]
    vocab: list[str]

    @property
    def bots(self) -> set[str]:
        return set(self.bot_names)


def _era_early(rng, vocab, page_id) -> ArticleRecord:
    created = _random_date(rng, date(2005, 1, 1), date(2019, 11, 30))
    edits = int(rng.integers(36, 41))
    editor_names = list(rng.choice([h for h in HUMAN_NAMES if h not in FLAGGED_CREATORS],
                                   size=4, replace=False))
    editor_names.append(str(rng.choice(BOT_NAMES)))
    meta = ArticleMetadata(
        total_edits=edits,
        total_editors=5,
        top_editors=_top_editors(rng, editor_names, edits),
        total_bytes=max(1, int(rng.normal(52_000, 1_500))),
        total_characters=max(1, int(rng.normal(16_000, 500))),
        total_words=max(1, int(rng.normal(2_600, 80))),
        creator_name=str(rng.choice([h for h in HUMAN_NAMES if h not in FLAGGED_CREATORS])),
        creation_date=created,
    )
    tokens = int(rng.integers(220, 321))
    return ArticleRecord(page_id, f"مقال-{page_id}", _text(rng, vocab, tokens), meta)


def _era_late(rng, vocab, page_id) -> ArticleRecord:
    created = _random_date(rng, date(2019, 12, 1), date(2023, 10, 31))
    edits = int(rng.integers(2, 5))
    n_editors = int(rng.integers(1, 3))
    if n_editors == 1 or rng.random() < 0.7:
        editor_names = list(rng.choice(BOT_NAMES, size=n_editors, replace=False))
    else:
        editor_names = [str(rng.choice(BOT_NAMES)), str(rng.choice(HUMAN_NAMES))]
    meta = ArticleMetadata(
        total_edits=edits,
        total_editors=n_editors,
        top_editors=_top_editors(rng, editor_names, edits),
        total_bytes=max(1, int(rng.normal(900, 60))),
        total_characters=max(1, int(rng.normal(300, 20))),
        total_words=max(1, int(rng.normal(55, 4))),
        creator_name=FLAGGED_CREATORS[0] if rng.random() < 0.75 else FLAGGED_CREATORS[1],
        creation_date=created,
    )
    tokens = int(rng.integers(60, 101))
    return ArticleRecord(page_id, f"بذرة-{page_id}", _text(rng, vocab, tokens), meta)


def _boundary(rng, vocab, page_id, kind: int) -> ArticleRecord:
    """Articles that should fail exactly one chain rule each way."""
    record = _era_early(rng, vocab, page_id)
    meta = record.metadata
    if kind == 0:    # created on the cutoff day: fails before-1
        meta.creation_date = date(2019, 12, 1)
    elif kind == 1:  # exactly five edits: fails before-2 and after-2
        meta.total_edits = 5
        meta.total_editors = 5
        meta.top_editors = meta.top_editors[:5]
        meta.top_editors = [(n, 1) for n, _ in meta.top_editors]
    elif kind == 2:  # exactly three editors: fails before-3
        meta.total_editors = 3
        meta.top_editors = [(n, c) for n, c in meta.top_editors[:3]]
    elif kind == 3:  # bot-majority editors on an old article: fails before-4
        bots = list(rng.choice(BOT_NAMES, size=3, replace=False))
        humans = list(rng.choice([h for h in HUMAN_NAMES if h not in FLAGGED_CREATORS],
                                 size=2, replace=False))
        meta.top_editors = _top_editors(rng, bots + humans, meta.total_edits)
        meta.total_editors = 5
    elif kind == 4:  # young stub (29 days at snapshot): fails after-1
        record = _era_late(rng, vocab, page_id)
        record.metadata.creation_date = date(2023, 12, 3)
    elif kind == 5:  # unflagged creator on a stub: fails after-5
        record = _era_late(rng, vocab, page_id)
        record.metadata.creator_name = "Raafat"
    elif kind == 6:  # human-majority stub: fails after-4
        record = _era_late(rng, vocab, page_id)
        humans = list(rng.choice([h for h in HUMAN_NAMES if h not in FLAGGED_CREATORS],
                                 size=2, replace=False))
        record.metadata.total_editors = 2
        record.metadata.total_edits = max(record.metadata.total_edits, 2)
        record.metadata.top_editors = _top_editors(rng, humans,
                                                   record.metadata.total_edits)
    return record


def _short_stub(rng, vocab, page_id) -> ArticleRecord:
    record = _era_late(rng, vocab, page_id)
    record.text = _text(rng, vocab, int(rng.integers(5, 50)), decorate=False)
    return record


def _markup_leak(rng, vocab, page_id) -> ArticleRecord:
    record = _era_early(rng, vocab, page_id)
    n = int(rng.integers(120, 200))
    words = [_MARKUP_TOKENS[int(i)] for i in rng.integers(0, len(_MARKUP_TOKENS), n)]
    arabic = [vocab[int(i)] for i in rng.integers(0, len(vocab), int(n * 0.5))]
    mixed = words + arabic
    rng.shuffle(mixed)
    record.text = " ".join(mixed)
    return record


def make_fixture_corpus(n: int = 2000, seed: int = 42) -> FixtureBundle:
    """Build ``n`` articles with planted class structure (deterministic)."""
    rng = np.random.default_rng(seed)
    vocab = _make_vocab(rng)
    records: list[ArticleRecord] = []
    n_early = int(n * 0.44)
    n_late = int(n * 0.44)
    n_boundary = int(n * 0.07)
    n_short = int(n * 0.04)
    n_markup = max(1, int(n * 0.01))
    page_id = 0

    def next_id():
        nonlocal page_id
        page_id += 1
        return page_id

    for _ in range(n_early):
        records.append(_era_early(rng, vocab, next_id()))
    for _ in range(n_late):
        records.append(_era_late(rng, vocab, next_id()))
    for i in range(n_boundary):
        records.append(_boundary(rng, vocab, next_id(), i % 7))
    for _ in range(n_short):
        records.append(_short_stub(rng, vocab, next_id()))
    for _ in range(n_markup):
        records.append(_markup_leak(rng, vocab, next_id()))
    while len(records) < n:
        records.append(_era_early(rng, vocab, next_id()))
    order = rng.permutation(len(records))
    records = [records[int(i)] for i in order]
    return FixtureBundle(records=records, bot_names=list(BOT_NAMES), vocab=vocab)


def articleinfo_doc(record: ArticleRecord) -> dict:
    meta = record.metadata
    return {
        "page": record.title,
        "revisions": meta.total_edits,
        "editors": meta.total_editors,
        "top_editors": [[name, count] for name, count in meta.top_editors],
        "bytes": meta.total_bytes,
        "characters": meta.total_characters,
        "words": meta.total_words,
        "author": meta.creator_name,
        "created_at": meta.creation_date.isoformat() if meta.creation_date else None,
    }


def write_bot_registry(bot_names, path, wiki_code: str = "arz") -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"#wiki={wiki_code}"] + sorted(bot_names)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_articleinfo_fixtures(records, fixture_dir) -> int:
    fixture_dir = Path(fixture_dir)
    fixture_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for record in records:
        doc = articleinfo_doc(record)
        out = fixture_dir / fixture_filename(record.title)
        out.write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True),
                       encoding="utf-8")
        count += 1
    return count


def write_page_vectors(records, path, dim: int = 768, seed: int = 7) -> None:
    """Synthetic per-article vector table (stand-in for contextual vectors)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            rng = np.random.default_rng((seed, record.page_id))
            vec = rng.normal(0.0, 1.0, dim)
            comps = " ".join(f"{v:.6f}" for v in vec)
            fh.write(f"{record.page_id} {comps}\n")


def write_word_vectors(vocab, path, dim: int = 300, seed: int = 11) -> None:
    """Synthetic word-vector table (stand-in for static vectors)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for i, token in enumerate(sorted(vocab)):
            rng = np.random.default_rng((seed, i))
            vec = rng.normal(0.0, 1.0, dim)
            comps = " ".join(f"{v:.6f}" for v in vec)
            fh.write(f"{token} {comps}\n")


def write_bundle(outdir, n: int = 2000, seed: int = 42,
                 per_class: int = 600) -> dict:
    """Materialize the full fixture bundle and its config files."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    bundle = make_fixture_corpus(n=n, seed=seed)
    corpus_path = outdir / "corpus.jsonl"
    write_corpus(bundle.records, corpus_path)
    write_bot_registry(bundle.bot_names, outdir / "bots.txt")
    write_articleinfo_fixtures(bundle.records, outdir / "articleinfo")
    pipeline_config = {
        "corpus": "corpus.jsonl",
        "bot_registry": "bots.txt",
        "workdir": "out",
        "seed": seed,
        "min_tokens": 50,
        "per_class": per_class,
        "model": "gbt",
        "feature": {"mode": "metadata", "metadata_fields": "ABCDE"},
    }
    (outdir / "config.json").write_text(
        json.dumps(pipeline_config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    scanner_config = {
        "model_path": "out/model.json",
        "corpus_path": "corpus.jsonl",
        "fixture_dir": "articleinfo",
        "project": "arz.wikipedia.org",
        "metadata_source": "fixture-dir",
        "port": 8601,
    }
    (outdir / "scanner.json").write_text(
        json.dumps(scanner_config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {
        "articles": len(bundle.records),
        "corpus": str(corpus_path),
        "config": str(outdir / "config.json"),
        "scanner_config": str(outdir / "scanner.json"),
    }


def main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        description="Generate the synthetic fixture bundle.")
    parser.add_argument("outdir")
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--per-class", type=int, default=600)
    args = parser.parse_args(argv)
    info = write_bundle(args.outdir, n=args.n, seed=args.seed,
                        per_class=args.per_class)
    print(json.dumps(info, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
