import random
from datetime import date

import pytest

from wikiforensics.fixtures import make_fixture_corpus
from wikiforensics.ingest import ArticleMetadata, ArticleRecord, BotRegistry


@pytest.fixture(scope="session")
def small_bundle():
    return make_fixture_corpus(n=400, seed=123)


@pytest.fixture()
def registry():
    return BotRegistry(wiki_code="arz",
                       bot_usernames={"JarBot", "ElphiBot", "GearBot",
                                      "SandBot-3", "TidyBot"})


def make_meta(edits=10, editors=3, top=None, bytes_=1000, chars=400, words=80,
              creator="Samira", created=date(2015, 6, 1)):
    top = top if top is not None else [("UserA", 4), ("UserB", 3), ("UserC", 2)]
    return ArticleMetadata(
        total_edits=edits, total_editors=editors, top_editors=top,
        total_bytes=bytes_, total_characters=chars, total_words=words,
        creator_name=creator, creation_date=created,
    )


def make_article(page_id=1, title="مقال", text="نص " * 60, **meta_kwargs):
    return ArticleRecord(page_id=page_id, title=title, text=text,
                         metadata=make_meta(**meta_kwargs))


def random_tokens(rng: random.Random, length: int, alphabet: int = 5):
    return [f"t{rng.randrange(alphabet)}" for _ in range(length)]
