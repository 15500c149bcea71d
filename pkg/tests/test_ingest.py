import json
from datetime import date

import pytest

from wikiforensics.errors import DataError, FetchError, SchemaError
from wikiforensics.ingest import (ArticleMetadata, XToolsClient,
                                  fetch_article_metadata, fixture_filename,
                                  load_bot_registry, load_corpus,
                                  metadata_from_articleinfo, write_corpus)

from conftest import make_article, make_meta

JSONL_DOC = {
    "page_id": 5, "title": "مصر", "text": "نص المقال",
    "metadata": {
        "total_edits": 7, "total_editors": 3,
        "top_editors": [["UserA", 4], ["JarBot", 2]],
        "total_bytes": 900, "total_characters": 420, "total_words": 80,
        "creator_name": "Samira", "creation_date": "2014-03-02",
    },
}


def write_jsonl(path, docs):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")


def test_jsonl_three_articles_in_order(tmp_path):
    docs = []
    for i in (1, 2, 3):
        doc = dict(JSONL_DOC)
        doc["page_id"] = i
        doc["title"] = f"مقال-{i}"
        docs.append(doc)
    path = tmp_path / "c.jsonl"
    write_jsonl(path, docs)
    records = list(load_corpus(path))
    assert [r.page_id for r in records] == [1, 2, 3]
    assert records[0].metadata.total_edits == 7
    assert records[0].metadata.creation_date == date(2014, 3, 2)


def test_jsonl_corrupt_line_is_skipped_with_record_error(tmp_path):
    docs = [dict(JSONL_DOC, page_id=i, title=f"t{i}") for i in range(1, 11)]
    lines = [json.dumps(d, ensure_ascii=False) for d in docs]
    lines[4] = '{"page_id": 5, "title": "broken"'  # truncated JSON
    path = tmp_path / "c.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    errors = []
    records = list(load_corpus(path, errors=errors))
    assert len(records) == 9
    assert len(errors) == 1
    assert errors[0].line == 5


def test_jsonl_roundtrip_identical(tmp_path):
    original = [make_article(page_id=i, title=f"عنوان-{i}", text=f"نص {i} " * 30)
                for i in range(1, 8)]
    path = tmp_path / "c.jsonl"
    write_corpus(original, path)
    reloaded = list(load_corpus(path))
    assert reloaded == original


def test_streaming_determinism(tmp_path):
    docs = [dict(JSONL_DOC, page_id=i, title=f"t{i}") for i in range(1, 21)]
    path = tmp_path / "c.jsonl"
    write_jsonl(path, docs)
    assert list(load_corpus(path)) == list(load_corpus(path))


def test_missing_file_is_fatal(tmp_path):
    with pytest.raises(DataError):
        load_corpus(tmp_path / "nope.jsonl")


def test_metadata_absent_flagged_incomplete(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [{"page_id": 1, "title": "t", "text": "x"}])
    (record,) = list(load_corpus(path))
    assert record.metadata.incomplete
    assert record.metadata.total_edits == 0
    assert record.metadata.creation_date is None


MEDIAWIKI_XML = """<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.10/">
  <page>
    <title>مصر</title>
    <ns>0</ns>
    <id>10</id>
    <revision><id>1</id><text>محتوى المقال الرئيسي</text></revision>
  </page>
  <page>
    <title>Talk:مصر</title>
    <ns>1</ns>
    <id>11</id>
    <revision><id>2</id><text>نقاش</text></revision>
  </page>
  <page>
    <title>فارغ</title>
    <ns>0</ns>
    <id>12</id>
    <revision><id>3</id><text></text></revision>
  </page>
</mediawiki>
"""


def test_xml_namespace_filter(tmp_path):
    path = tmp_path / "dump.xml"
    path.write_text(MEDIAWIKI_XML, encoding="utf-8")
    records = list(load_corpus(path, format="mediawiki-xml"))
    assert len(records) == 1
    assert records[0].page_id == 10
    assert records[0].title == "مصر"
    assert records[0].metadata.incomplete


def test_bot_registry_basic(tmp_path):
    path = tmp_path / "bots.txt"
    path.write_text("#wiki=ar\nJarBot\nElphiBot\n", encoding="utf-8")
    registry = load_bot_registry(path)
    assert registry.wiki_code == "ar"
    assert registry.bot_usernames == {"JarBot", "ElphiBot"}
    assert "JarBot" in registry


def test_bot_registry_deduplicates(tmp_path):
    path = tmp_path / "bots.txt"
    path.write_text("#wiki=ar\nJarBot\nJarBot\nElphiBot\n", encoding="utf-8")
    assert load_bot_registry(path).bot_usernames == {"JarBot", "ElphiBot"}


def test_bot_registry_none_sentinel(tmp_path):
    path = tmp_path / "bots.txt"
    path.write_text("#wiki=arz\nnone\n", encoding="utf-8")
    registry = load_bot_registry(path)
    assert registry.wiki_code == "arz"
    assert registry.bot_usernames == set()


def test_bot_registry_empty_file_errors(tmp_path):
    path = tmp_path / "bots.txt"
    path.write_text("", encoding="utf-8")
    with pytest.raises(DataError):
        load_bot_registry(path)


ARTICLEINFO = {
    "page": "مصر", "revisions": 7, "editors": 3,
    "top_editors": [["UserA", 4], ["JarBot", 2]],
    "bytes": 900, "characters": 420, "words": 80,
    "author": "Samira", "created_at": "2014-03-02",
}


def test_fetch_from_fixture_dir(tmp_path):
    fixture_dir = tmp_path / "articleinfo"
    fixture_dir.mkdir()
    (fixture_dir / fixture_filename("مصر")).write_text(
        json.dumps(ARTICLEINFO, ensure_ascii=False), encoding="utf-8")
    meta = fetch_article_metadata("arz.wikipedia.org", "مصر",
                                  fixture_dir=fixture_dir)
    assert meta.total_edits == 7
    assert meta.total_editors == 3
    assert meta.top_editors == [("UserA", 4), ("JarBot", 2)]
    assert meta.creation_date == date(2014, 3, 2)


def test_fetch_missing_fixture_is_retryable_error(tmp_path):
    client = XToolsClient(fixture_dir=tmp_path, source="fixture-dir")
    with pytest.raises(FetchError) as err:
        client.fetch("arz.wikipedia.org", "غائب")
    assert err.value.retryable


def test_fetch_is_pure_in_fixture_mode(tmp_path):
    fixture_dir = tmp_path
    (fixture_dir / fixture_filename("مصر")).write_text(
        json.dumps(ARTICLEINFO, ensure_ascii=False), encoding="utf-8")
    client = XToolsClient(fixture_dir=fixture_dir, source="fixture-dir")
    first = client.fetch("arz.wikipedia.org", "مصر")
    second = client.fetch("arz.wikipedia.org", "مصر")
    assert first == second


def test_articleinfo_string_encoded_numbers():
    doc = dict(ARTICLEINFO, revisions="7", editors="3", bytes="1,024")
    meta = metadata_from_articleinfo(doc)
    assert meta.total_edits == 7
    assert meta.total_editors == 3
    assert meta.total_bytes == 1024


def test_articleinfo_missing_field_names_it():
    doc = dict(ARTICLEINFO)
    del doc["editors"]
    with pytest.raises(SchemaError) as err:
        metadata_from_articleinfo(doc)
    assert err.value.field == "editors"


def test_metadata_invariant_editors_vs_edits():
    with pytest.raises(DataError):
        ArticleMetadata(total_edits=2, total_editors=5,
                        top_editors=[("A", 1)]).validate()


def test_metadata_invariant_top_editor_sum():
    meta = make_meta(edits=5, top=[("A", 4), ("B", 3)])
    with pytest.raises(DataError):
        meta.validate()
