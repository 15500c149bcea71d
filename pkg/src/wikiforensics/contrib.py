"""Creator/editor typing and contribution percentages.

Contributors are bots when the registry says so (optionally also by a
"...Bot" suffix heuristic). An article counts as bot-edited when strictly
more than half of its distinct listed editors are bots; exactly half stays
human-edited.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import DataError
from .ingest import ArticleMetadata, ArticleRecord, BotRegistry

logger = logging.getLogger(__name__)

BOT_EDITED_SHARE = 0.5


def classify_contributor(username: str, registry: BotRegistry,
                         suffix_heuristic: bool = False) -> str:
    """Return "bot" or "human" for one username."""
    if not username:
        raise DataError("username must be non-empty")
    if username in registry:
        return "bot"
    if suffix_heuristic and username.lower().endswith("bot"):
        return "bot"
    return "human"


@dataclass
class ContributorBreakdown:
    creator_type: str
    bot_editor_share: float
    edited_by: str

    @property
    def human_editor_share(self) -> float:
        return 1.0 - self.bot_editor_share


def breakdown_article(meta: ArticleMetadata, registry: BotRegistry,
                      suffix_heuristic: bool = False) -> ContributorBreakdown:
    """Type the creator and measure the bot share among listed editors.

    The share is computed over the distinct editors present in
    ``top_editors`` (the metadata API exposes top editors, not the full
    list); when that list is shorter than ``total_editors`` the gap is
    logged, since the share is then a proxy.
    """
    editors = {name for name, _ in meta.top_editors}
    if not editors:
        raise DataError("cannot break down an article with no listed editors")
    if meta.total_editors > len(editors):
        logger.debug(
            "top_editors lists %d of %d editors; bot share is a proxy",
            len(editors), meta.total_editors,
        )
    bots = sum(1 for name in editors
               if classify_contributor(name, registry, suffix_heuristic) == "bot")
    share = bots / len(editors)
    return ContributorBreakdown(
        creator_type=classify_contributor(meta.creator_name, registry, suffix_heuristic)
        if meta.creator_name else "human",
        bot_editor_share=share,
        edited_by="bot-edited" if share > BOT_EDITED_SHARE else "human-edited",
    )


@dataclass
class CreatorRanking:
    entries: list[tuple[str, int, float, str]]  # (username, created, pct, type)
    total_articles: int


def rank_creators(articles: Iterable[ArticleRecord], registry: BotRegistry,
                  top_n: int = 5, suffix_heuristic: bool = False) -> CreatorRanking:
    """Top page creators by article count with share percentages."""
    counts: Counter[str] = Counter()
    total = 0
    for article in articles:
        total += 1
        if article.metadata.creator_name:
            counts[article.metadata.creator_name] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    entries = [
        (name, created, 100.0 * created / total,
         classify_contributor(name, registry, suffix_heuristic))
        for name, created in ranked
    ]
    return CreatorRanking(entries=entries, total_articles=total)


@dataclass
class ContributionShares:
    creator_bot_pct: float
    creator_human_pct: float
    editor_bot_pct: float
    editor_human_pct: float
    articles_counted: int
    articles_without_editors: int


def creator_editor_percentages(articles: Iterable[ArticleRecord], registry: BotRegistry,
                               suffix_heuristic: bool = False) -> ContributionShares:
    """Bot/human percentages for creators (absolute counts) and editors.

    Editor percentages classify each article as bot- or human-edited via
    its breakdown; articles without any listed editor are excluded from
    the editor denominator and reported.
    """
    creator_counts = Counter()
    edited_counts = Counter()
    total = 0
    skipped = 0
    for article in articles:
        total += 1
        meta = article.metadata
        creator = meta.creator_name or ""
        creator_counts[
            classify_contributor(creator, registry, suffix_heuristic) if creator else "human"
        ] += 1
        if not meta.top_editors:
            skipped += 1
            continue
        breakdown = breakdown_article(meta, registry, suffix_heuristic)
        edited_counts[breakdown.edited_by] += 1
    if total == 0:
        raise DataError("cannot compute contribution percentages for an empty corpus")
    edited_total = total - skipped
    if skipped:
        logger.warning("%d articles had no listed editors and were excluded "
                       "from editor percentages", skipped)

    def pct(count: int, denom: int) -> float:
        return 100.0 * count / denom if denom else 0.0

    return ContributionShares(
        creator_bot_pct=pct(creator_counts["bot"], total),
        creator_human_pct=pct(creator_counts["human"], total),
        editor_bot_pct=pct(edited_counts["bot-edited"], edited_total),
        editor_human_pct=pct(edited_counts["human-edited"], edited_total),
        articles_counted=total,
        articles_without_editors=skipped,
    )
