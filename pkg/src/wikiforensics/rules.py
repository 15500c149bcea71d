"""Heuristic filtration rule engine and training-pool sampling.

Two rule chains partition a corpus: long-standing, actively human-edited
articles created before the mass-translation era become "human-generated";
young, barely edited, bot-majority articles created inside the era by one
of the flagged mass-creator accounts become "template-translated".
Everything else stays uncategorized with its failure reasons. Each chain
is evaluated in listed order and attrition per rule is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from .contrib import breakdown_article
from .errors import DataError
from .ingest import ArticleRecord, BotRegistry

LABEL_HUMAN = "human-generated"
LABEL_TEMPLATE = "template-translated"
LABEL_UNCATEGORIZED = "uncategorized"

BEFORE_RULES = ("before-1-created-early", "before-2-edits", "before-3-editors",
                "before-4-human-share")
AFTER_RULES = ("after-1-created-in-window", "after-2-edits", "after-3-editors",
               "after-4-bot-share", "after-5-flagged-creator")


@dataclass
class RuleConfig:
    before_cutoff: date = date(2019, 12, 1)
    after_window_end: date = date(2023, 12, 1)
    young_age_days: int = 30
    snapshot_date: date = date(2024, 1, 1)
    edits_hi: int = 5
    editors_hi: int = 3
    share_threshold: float = 0.5
    flagged_creators: frozenset[str] = frozenset({"HitomiAkane", "Al-Dandoon"})

    def __post_init__(self):
        if self.young_age_days < 0:
            raise DataError("young_age_days must be >= 0")
        if self.after_window_end <= self.before_cutoff:
            raise DataError("after window must end after it starts")


def _require_metadata(article: ArticleRecord) -> None:
    meta = article.metadata
    if meta.creation_date is None:
        raise DataError(f"article {article.page_id} is missing creation_date")
    if not meta.top_editors:
        raise DataError(f"article {article.page_id} lists no editors")


def apply_before_rules(article: ArticleRecord, registry: BotRegistry,
                       cfg: RuleConfig | None = None) -> tuple[bool, str | None]:
    """Evaluate the human-generated chain; returns (passed, first failing rule)."""
    cfg = cfg or RuleConfig()
    _require_metadata(article)
    meta = article.metadata
    if not meta.creation_date < cfg.before_cutoff:
        return False, BEFORE_RULES[0]
    if not meta.total_edits > cfg.edits_hi:
        return False, BEFORE_RULES[1]
    if not meta.total_editors > cfg.editors_hi:
        return False, BEFORE_RULES[2]
    breakdown = breakdown_article(meta, registry)
    if not breakdown.human_editor_share >= cfg.share_threshold:
        return False, BEFORE_RULES[3]
    return True, None


def apply_after_rules(article: ArticleRecord, registry: BotRegistry,
                      cfg: RuleConfig | None = None) -> tuple[bool, str | None]:
    """Evaluate the template-translated chain; returns (passed, first failing rule)."""
    cfg = cfg or RuleConfig()
    _require_metadata(article)
    meta = article.metadata
    created = meta.creation_date
    in_window = cfg.before_cutoff <= created < cfg.after_window_end
    age_days = (cfg.snapshot_date - created).days
    if not (in_window and age_days >= cfg.young_age_days):
        return False, AFTER_RULES[0]
    if not meta.total_edits < cfg.edits_hi:
        return False, AFTER_RULES[1]
    if not meta.total_editors < cfg.editors_hi:
        return False, AFTER_RULES[2]
    breakdown = breakdown_article(meta, registry)
    if not breakdown.bot_editor_share >= cfg.share_threshold:
        return False, AFTER_RULES[3]
    if meta.creator_name not in cfg.flagged_creators:
        return False, AFTER_RULES[4]
    return True, None


@dataclass
class LabeledArticle:
    page_id: int
    label: str
    matched_rules: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"page_id": self.page_id, "label": self.label,
                "matched_rules": self.matched_rules}


@dataclass
class LabelingReport:
    labeled: list[LabeledArticle]
    attrition: dict[str, dict[str, int]]  # chain -> rule id -> filtered-out count
    counts: dict[str, int]

    def reconciles(self) -> bool:
        return sum(self.counts.values()) == len(self.labeled)


def label_corpus(articles: Iterable[ArticleRecord], registry: BotRegistry,
                 cfg: RuleConfig | None = None) -> LabelingReport:
    """Label every article and account for per-rule attrition in both chains.

    Articles whose metadata cannot support the rules (no creation date or
    no listed editors) are kept as uncategorized with a reason code rather
    than aborting the run.
    """
    cfg = cfg or RuleConfig()
    labeled: list[LabeledArticle] = []
    attrition = {
        "before": {rule: 0 for rule in BEFORE_RULES},
        "after": {rule: 0 for rule in AFTER_RULES},
    }
    counts = {LABEL_HUMAN: 0, LABEL_TEMPLATE: 0, LABEL_UNCATEGORIZED: 0}
    for article in articles:
        try:
            before_ok, before_fail = apply_before_rules(article, registry, cfg)
            after_ok, after_fail = apply_after_rules(article, registry, cfg)
        except DataError as exc:
            counts[LABEL_UNCATEGORIZED] += 1
            labeled.append(LabeledArticle(article.page_id, LABEL_UNCATEGORIZED,
                                          [f"incomplete-metadata: {exc}"]))
            continue
        if before_ok and after_ok:
            raise DataError(
                f"article {article.page_id} satisfies both rule chains; "
                "the date windows should make that impossible"
            )
        if before_fail:
            attrition["before"][before_fail] += 1
        if after_fail:
            attrition["after"][after_fail] += 1
        if before_ok:
            counts[LABEL_HUMAN] += 1
            labeled.append(LabeledArticle(article.page_id, LABEL_HUMAN, list(BEFORE_RULES)))
        elif after_ok:
            counts[LABEL_TEMPLATE] += 1
            labeled.append(LabeledArticle(article.page_id, LABEL_TEMPLATE, list(AFTER_RULES)))
        else:
            counts[LABEL_UNCATEGORIZED] += 1
            labeled.append(LabeledArticle(article.page_id, LABEL_UNCATEGORIZED,
                                          [before_fail, after_fail]))
    return LabelingReport(labeled=labeled, attrition=attrition, counts=counts)


def sample_training_pool(labeled: Iterable[LabeledArticle], per_class: int,
                         seed: int) -> list[LabeledArticle]:
    """Balanced uniform sample without replacement from the two label classes.

    Deterministic for a fixed seed; raises with the deficit if either class
    is smaller than ``per_class``.
    """
    if per_class < 1:
        raise DataError("per_class must be >= 1")
    pools = {LABEL_HUMAN: [], LABEL_TEMPLATE: []}
    for article in labeled:
        if article.label in pools:
            pools[article.label].append(article)
    for label, pool in pools.items():
        if len(pool) < per_class:
            raise DataError(
                f"class {label!r} has only {len(pool)} articles; "
                f"{per_class - len(pool)} short of the requested {per_class}"
            )
    rng = random.Random(seed)
    sample: list[LabeledArticle] = []
    for label in (LABEL_HUMAN, LABEL_TEMPLATE):
        pool = sorted(pools[label], key=lambda a: a.page_id)
        sample.extend(rng.sample(pool, per_class))
    return sample
