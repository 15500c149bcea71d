import random

import pytest

from wikiforensics.contrib import (breakdown_article, classify_contributor,
                                   creator_editor_percentages, rank_creators)
from wikiforensics.errors import DataError
from wikiforensics.ingest import BotRegistry

from conftest import make_article, make_meta


class TestClassify:
    def test_registry_bot(self, registry):
        assert classify_contributor("JarBot", registry) == "bot"

    def test_human(self, registry):
        assert classify_contributor("HitomiAkane", registry) == "human"

    def test_suffix_heuristic_flag(self, registry):
        assert classify_contributor("FooBot", registry) == "human"
        assert classify_contributor("FooBot", registry, suffix_heuristic=True) == "bot"

    def test_empty_username_errors(self, registry):
        with pytest.raises(DataError):
            classify_contributor("", registry)

    def test_registry_monotonicity(self):
        rng = random.Random(97)
        names = [f"user{i}" for i in range(30)] + [f"Helper{i}Bot" for i in range(5)]
        bots = set(rng.sample(names, 8))
        registry = BotRegistry("t", set(bots))
        before = {n: classify_contributor(n, registry) for n in names}
        for extra in set(names) - bots:
            grown = BotRegistry("t", bots | {extra})
            after = {n: classify_contributor(n, grown) for n in names}
            for name in names:
                if before[name] == "bot":
                    assert after[name] == "bot"


class TestBreakdown:
    def test_one_bot_of_three(self, registry):
        meta = make_meta(top=[("JarBot", 4), ("UserX", 3), ("UserY", 2)])
        b = breakdown_article(meta, registry)
        assert b.bot_editor_share == pytest.approx(1 / 3)
        assert b.edited_by == "human-edited"

    def test_two_bots_of_three(self, registry):
        meta = make_meta(top=[("JarBot", 4), ("ElphiBot", 3), ("UserX", 2)])
        b = breakdown_article(meta, registry)
        assert b.bot_editor_share == pytest.approx(2 / 3)
        assert b.edited_by == "bot-edited"

    def test_exactly_half_is_human_edited(self, registry):
        meta = make_meta(editors=2, top=[("JarBot", 4), ("UserX", 3)])
        b = breakdown_article(meta, registry)
        assert b.bot_editor_share == pytest.approx(0.5)
        assert b.edited_by == "human-edited"

    def test_empty_editor_list_errors(self, registry):
        meta = make_meta(top=[])
        with pytest.raises(DataError):
            breakdown_article(meta, registry)

    def test_order_independent(self, registry):
        top = [("JarBot", 4), ("UserX", 3), ("UserY", 2)]
        a = breakdown_article(make_meta(top=top), registry)
        b = breakdown_article(make_meta(top=list(reversed(top))), registry)
        assert a.bot_editor_share == b.bot_editor_share
        assert a.edited_by == b.edited_by


class TestRanking:
    def test_dominant_creator_share(self, registry):
        articles = [make_article(page_id=i + 1, creator="X" if i < 885 else f"u{i}")
                    for i in range(1000)]
        ranking = rank_creators(articles, registry)
        name, count, pct, kind = ranking.entries[0]
        assert (name, count) == ("X", 885)
        assert pct == pytest.approx(88.5)
        assert kind == "human"

    def test_all_distinct_creators(self, registry):
        articles = [make_article(page_id=i + 1, creator=f"u{i}") for i in range(10)]
        ranking = rank_creators(articles, registry, top_n=10)
        assert all(pct == pytest.approx(10.0) for _, _, pct, _ in ranking.entries)

    def test_scaled_two_dominant_creators(self, registry):
        # 1,436,430 / 113,468 / rest, scaled by 1/1000 against 1,621,745 total
        counts = {"HitomiAkane": 1436, "Al-Dandoon": 113, "Raafat": 18}
        total = 1622
        articles = []
        i = 0
        for name, c in counts.items():
            for _ in range(c):
                articles.append(make_article(page_id=i + 1, creator=name))
                i += 1
        while i < total:
            articles.append(make_article(page_id=i + 1, creator=f"u{i}"))
            i += 1
        ranking = rank_creators(articles, registry)
        top = {name: pct for name, _, pct, _ in ranking.entries}
        assert top["HitomiAkane"] == pytest.approx(88.6, abs=0.1)
        assert top["Al-Dandoon"] == pytest.approx(7.0, abs=0.1)


class TestPercentages:
    def test_all_creators_human(self, registry):
        articles = [make_article(page_id=i + 1, creator=f"u{i}") for i in range(20)]
        shares = creator_editor_percentages(articles, registry)
        assert shares.creator_human_pct == pytest.approx(100.0)
        assert shares.creator_bot_pct == pytest.approx(0.0)

    def test_empty_corpus_errors(self, registry):
        with pytest.raises(DataError):
            creator_editor_percentages([], registry)

    def test_matches_bruteforce_recount(self, registry):
        rng = random.Random(101)
        bots = sorted(registry.bot_usernames)
        articles = []
        for i in range(200):
            creator = rng.choice(bots) if rng.random() < 0.3 else f"u{rng.randrange(40)}"
            n_editors = rng.randrange(1, 5)
            editors = []
            for j in range(n_editors):
                editors.append(rng.choice(bots) if rng.random() < 0.5
                               else f"e{rng.randrange(30)}")
            editors = list(dict.fromkeys(editors))
            top = [(e, 1) for e in editors]
            articles.append(make_article(
                page_id=i + 1, creator=creator, edits=max(10, len(top)),
                editors=len(top), top=top))
        shares = creator_editor_percentages(articles, registry)

        bot_creators = sum(1 for a in articles
                           if a.metadata.creator_name in registry.bot_usernames)
        assert shares.creator_bot_pct == pytest.approx(100 * bot_creators / 200)

        bot_edited = 0
        for a in articles:
            editors = [n for n, _ in a.metadata.top_editors]
            share = sum(1 for e in editors if e in registry.bot_usernames) / len(editors)
            if share > 0.5:
                bot_edited += 1
        assert shares.editor_bot_pct == pytest.approx(100 * bot_edited / 200)

    def test_percentages_sum_to_100(self, registry, small_bundle):
        shares = creator_editor_percentages(small_bundle.records, registry)
        assert shares.creator_bot_pct + shares.creator_human_pct == pytest.approx(100.0)
        assert shares.editor_bot_pct + shares.editor_human_pct == pytest.approx(100.0)
