"""Corpus, metadata, and bot-registry ingestion.

Three sources feed the toolkit: JSONL corpus files (the canonical
interchange format, one article object per line), mediawiki XML exports
(main-namespace pages only), and an articleinfo-style HTTP API for per-page
edit metadata, with a write-once local fixture cache so analysis runs are
reproducible and offline.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, asdict
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator
from urllib.parse import quote

from .errors import DataError, FetchError, RecordError, SchemaError

logger = logging.getLogger(__name__)

METADATA_FIELDS = (
    "total_edits",
    "total_editors",
    "top_editors",
    "total_bytes",
    "total_characters",
    "total_words",
    "creator_name",
    "creation_date",
)


@dataclass
class ArticleMetadata:
    """Edit-history metadata for one article, as served by articleinfo."""

    total_edits: int = 0
    total_editors: int = 0
    top_editors: list[tuple[str, int]] = field(default_factory=list)
    total_bytes: int = 0
    total_characters: int = 0
    total_words: int = 0
    creator_name: str = ""
    creation_date: date | None = None
    incomplete: bool = False

    def validate(self) -> None:
        if self.total_edits > 0 and self.total_editors > self.total_edits:
            raise DataError(
                f"total_editors {self.total_editors} exceeds total_edits {self.total_edits}"
            )
        top_sum = sum(c for _, c in self.top_editors)
        if top_sum > self.total_edits:
            raise DataError(
                f"top_editors edit counts sum to {top_sum} > total_edits {self.total_edits}"
            )

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d.pop("incomplete")
        d["top_editors"] = [[name, count] for name, count in self.top_editors]
        d["creation_date"] = self.creation_date.isoformat() if self.creation_date else None
        return d


@dataclass
class ArticleRecord:
    """One article: text plus its edit metadata."""

    page_id: int
    title: str
    text: str
    metadata: ArticleMetadata = field(default_factory=lambda: ArticleMetadata(incomplete=True))

    def to_json_dict(self) -> dict:
        return {
            "page_id": self.page_id,
            "title": self.title,
            "text": self.text,
            "metadata": self.metadata.to_json_dict(),
        }


@dataclass
class BotRegistry:
    """Known bot accounts for one wiki edition (case-sensitive usernames)."""

    wiki_code: str
    bot_usernames: set[str] = field(default_factory=set)

    def __contains__(self, username: str) -> bool:
        return username in self.bot_usernames


def _parse_int(value, field_name: str) -> int:
    if isinstance(value, bool):
        raise SchemaError(field_name)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.replace(",", ""))
        except ValueError:
            raise SchemaError(field_name) from None
    raise SchemaError(field_name)


def _parse_date(value, field_name: str) -> date:
    if isinstance(value, str):
        try:
            return date.fromisoformat(value[:10])
        except ValueError:
            raise SchemaError(field_name) from None
    raise SchemaError(field_name)


def _parse_top_editors(value, field_name: str = "top_editors") -> list[tuple[str, int]]:
    if not isinstance(value, list):
        raise SchemaError(field_name)
    out = []
    for entry in value:
        if isinstance(entry, dict):
            name = entry.get("username", entry.get("name"))
            count = entry.get("count", entry.get("edits"))
        elif isinstance(entry, (list, tuple)) and len(entry) == 2:
            name, count = entry
        else:
            raise SchemaError(field_name)
        if not isinstance(name, str) or not name:
            raise SchemaError(field_name)
        out.append((name, _parse_int(count, field_name)))
    return out


def metadata_from_json(doc: dict) -> ArticleMetadata:
    """Build ArticleMetadata from a JSONL ``metadata`` object.

    Absent fields default to zero/empty and mark the record incomplete.
    """
    incomplete = False
    values = {}
    for name in METADATA_FIELDS:
        if name not in doc or doc[name] is None:
            incomplete = True
    values["total_edits"] = _parse_int(doc.get("total_edits", 0), "total_edits")
    values["total_editors"] = _parse_int(doc.get("total_editors", 0), "total_editors")
    values["top_editors"] = _parse_top_editors(doc.get("top_editors", []))
    values["total_bytes"] = _parse_int(doc.get("total_bytes", 0), "total_bytes")
    values["total_characters"] = _parse_int(doc.get("total_characters", 0), "total_characters")
    values["total_words"] = _parse_int(doc.get("total_words", 0), "total_words")
    values["creator_name"] = str(doc.get("creator_name", "") or "")
    raw_date = doc.get("creation_date")
    values["creation_date"] = _parse_date(raw_date, "creation_date") if raw_date else None
    meta = ArticleMetadata(incomplete=incomplete, **values)
    meta.validate()
    return meta


def _record_from_json(doc: dict) -> ArticleRecord:
    for name in ("page_id", "title", "text"):
        if name not in doc:
            raise SchemaError(name)
    page_id = _parse_int(doc["page_id"], "page_id")
    if page_id < 1:
        raise DataError(f"page_id must be >= 1, got {page_id}")
    title = doc["title"]
    if not isinstance(title, str) or not title:
        raise SchemaError("title")
    text = doc["text"]
    if not isinstance(text, str):
        raise SchemaError("text")
    if "metadata" in doc and isinstance(doc["metadata"], dict):
        metadata = metadata_from_json(doc["metadata"])
    else:
        metadata = ArticleMetadata(incomplete=True)
    return ArticleRecord(page_id=page_id, title=title, text=text, metadata=metadata)


def _iter_jsonl(path: Path, errors: list[RecordError] | None) -> Iterator[ArticleRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                if not isinstance(doc, dict):
                    raise DataError("article record must be a JSON object")
                yield _record_from_json(doc)
            except (json.JSONDecodeError, DataError) as exc:
                err = RecordError(line=line_no, offset=None, message=str(exc))
                if errors is not None:
                    errors.append(err)
                logger.warning("skipping bad record at %s: %s", path, err)


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _iter_mediawiki_xml(path: Path, errors: list[RecordError] | None) -> Iterator[ArticleRecord]:
    """Stream main-namespace pages with non-empty text from an XML export."""
    try:
        context = ET.iterparse(str(path), events=("end",))
        for _, elem in context:
            if _local_name(elem.tag) != "page":
                continue
            ns_text = None
            title = None
            page_id = None
            text = None
            for child in elem:
                name = _local_name(child.tag)
                if name == "ns":
                    ns_text = (child.text or "").strip()
                elif name == "title":
                    title = child.text or ""
                elif name == "id" and page_id is None:
                    page_id = (child.text or "").strip()
                elif name == "revision":
                    for sub in child:
                        if _local_name(sub.tag) == "text":
                            text = sub.text or ""
            elem.clear()
            if ns_text != "0" or not text or not text.strip():
                continue
            try:
                yield ArticleRecord(
                    page_id=_parse_int(page_id, "id"),
                    title=title or "",
                    text=text,
                    metadata=ArticleMetadata(incomplete=True),
                )
            except DataError as exc:
                err = RecordError(line=None, offset=None, message=str(exc))
                if errors is not None:
                    errors.append(err)
                logger.warning("skipping bad page in %s: %s", path, err)
    except ET.ParseError as exc:
        raise DataError(f"unparseable XML in {path}: {exc}") from exc


def load_corpus(path, format: str = "jsonl",
                errors: list[RecordError] | None = None) -> Iterator[ArticleRecord]:
    """Stream ArticleRecords from a corpus file.

    Malformed records are skipped and reported into ``errors`` (or logged);
    an unreadable or unparseable file raises DataError.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"corpus file not found: {path}")
    if format == "jsonl":
        return _iter_jsonl(path, errors)
    if format == "mediawiki-xml":
        return _iter_mediawiki_xml(path, errors)
    raise DataError(f"unknown corpus format: {format!r}")


def write_corpus(records: Iterable[ArticleRecord], path) -> int:
    """Write records as canonical JSONL (UTF-8, one object per line)."""
    count = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            count += 1
    return count


def load_bot_registry(path) -> BotRegistry:
    """Read a newline-delimited bot-username file.

    First line must be a ``#wiki=CODE`` header. A single ``none`` sentinel
    line declares an explicitly empty registry; an empty file is an error.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"bot registry file not found: {path}")
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DataError(f"bot registry is empty: {path} (use a 'none' sentinel line)")
    header = lines[0]
    m = re.fullmatch(r"#wiki=(\S+)", header)
    if not m:
        raise DataError(f"bot registry must start with '#wiki=CODE', got {header!r}")
    wiki_code = m.group(1)
    names = lines[1:]
    if not names:
        raise DataError(f"bot registry {path} lists no usernames (use a 'none' sentinel line)")
    if names == ["none"]:
        return BotRegistry(wiki_code=wiki_code, bot_usernames=set())
    if "none" in names:
        raise DataError("'none' sentinel cannot be mixed with usernames")
    return BotRegistry(wiki_code=wiki_code, bot_usernames=set(names))


_ARTICLEINFO_REQUIRED = ("revisions", "editors", "top_editors", "bytes",
                         "characters", "words", "author", "created_at")


def metadata_from_articleinfo(doc: dict) -> ArticleMetadata:
    """Map an articleinfo JSON document onto ArticleMetadata."""
    for name in _ARTICLEINFO_REQUIRED:
        if name not in doc:
            raise SchemaError(name)
    meta = ArticleMetadata(
        total_edits=_parse_int(doc["revisions"], "revisions"),
        total_editors=_parse_int(doc["editors"], "editors"),
        top_editors=_parse_top_editors(doc["top_editors"]),
        total_bytes=_parse_int(doc["bytes"], "bytes"),
        total_characters=_parse_int(doc["characters"], "characters"),
        total_words=_parse_int(doc["words"], "words"),
        creator_name=str(doc["author"]),
        creation_date=_parse_date(doc["created_at"], "created_at"),
    )
    meta.validate()
    return meta


def fixture_filename(title: str) -> str:
    return quote(title, safe="") + ".json"


class XToolsClient:
    """Fetches per-article metadata from an articleinfo endpoint.

    In ``fixture-dir`` mode responses come only from the local cache; in
    ``live`` mode a miss goes to the HTTP API and the response is cached
    write-once under the fixture directory.
    """

    def __init__(self, base_url: str | None = None, fixture_dir=None,
                 source: str = "fixture-dir", timeout: float = 15.0):
        if source not in ("live", "fixture-dir"):
            raise DataError(f"unknown metadata source: {source!r}")
        if source == "live" and not base_url:
            raise DataError("live metadata source requires a base URL")
        self.base_url = (base_url or "").rstrip("/")
        self.fixture_dir = Path(fixture_dir) if fixture_dir else None
        self.source = source
        self.timeout = timeout
        self._write_lock = threading.Lock()

    def _fixture_path(self, title: str) -> Path | None:
        if self.fixture_dir is None:
            return None
        return self.fixture_dir / fixture_filename(title)

    def fetch(self, project: str, title: str) -> ArticleMetadata:
        if not title:
            raise DataError("title must be non-empty")
        fixture = self._fixture_path(title)
        if fixture is not None and fixture.is_file():
            doc = json.loads(fixture.read_text(encoding="utf-8"))
            return metadata_from_articleinfo(doc)
        if self.source == "fixture-dir":
            raise FetchError(f"no cached metadata for {title!r} "
                             f"(looked in {self.fixture_dir})")
        doc = self._fetch_live(project, title)
        if fixture is not None:
            with self._write_lock:
                if not fixture.is_file():
                    fixture.parent.mkdir(parents=True, exist_ok=True)
                    fixture.write_text(
                        json.dumps(doc, ensure_ascii=False, sort_keys=True),
                        encoding="utf-8",
                    )
        return metadata_from_articleinfo(doc)

    def _fetch_live(self, project: str, title: str) -> dict:
        import requests

        url = f"{self.base_url}/api/page/articleinfo/{project}/{quote(title, safe='')}"
        try:
            resp = requests.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise FetchError(f"metadata fetch failed for {title!r}: {exc}") from exc
        if resp.status_code != 200:
            raise FetchError(f"metadata fetch for {title!r} returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise FetchError(f"non-JSON articleinfo response for {title!r}") from exc


def fetch_article_metadata(project: str, title: str, source: str = "fixture-dir",
                           base_url: str | None = None, fixture_dir=None) -> ArticleMetadata:
    """One-shot convenience wrapper around XToolsClient."""
    client = XToolsClient(base_url=base_url, fixture_dir=fixture_dir, source=source)
    return client.fetch(project, title)
