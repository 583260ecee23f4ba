"""
Tag structure: position ranks within bookmarks and tag function classes
"""

import logging
import re
from collections import Counter, defaultdict
from typing import Dict, List, Optional

from collab_tagging_simulator.core.data_models import (
    Dataset, Lexicons, PositionRankReport, TagKind, TagKindSummary, UrlHistory
)
from collab_tagging_simulator.core.exceptions import ArgumentError, EmptyInputError

logger = logging.getLogger(__name__)

NUMERIC_TAG = re.compile(r"^\d+(\.\d+)?$")

DEFAULT_LEXICONS = Lexicons()


def tag_ranks(history: UrlHistory) -> Dict[str, int]:
    """1-based rank of every tag by descending frequency, ties lexicographic"""
    frequency = Counter(tag for bookmark in history.entries for tag in bookmark.tags)
    ordered = sorted(frequency.items(), key=lambda item: (-item[1], item[0]))
    return {tag: rank for rank, (tag, _) in enumerate(ordered, start=1)}


def position_rank_analysis(history: UrlHistory) -> PositionRankReport:
    """
    Median frequency rank of the tags found at each position

    Args:
        history: Bookmarks of one URL

    Returns:
        PositionRankReport keyed by 1-based position; even-length lists use the lower median
    """
    ranks = tag_ranks(history)
    if not ranks:
        raise EmptyInputError(f"history {history.key!r} has no tagged bookmarks")

    by_position: Dict[int, List[int]] = defaultdict(list)
    for bookmark in history.entries:
        for position, tag in enumerate(bookmark.tags, start=1):
            by_position[position].append(ranks[tag])

    medians = {}
    for position in sorted(by_position):
        observed = sorted(by_position[position])
        medians[position] = observed[(len(observed) - 1) // 2]

    return PositionRankReport(
        key=history.key,
        median_ranks=medians,
        observations={position: len(by_position[position]) for position in sorted(by_position)},
        tag_ranks=ranks,
    )


def classify_tag_kind(tag: str, lexicons: Optional[Lexicons] = None) -> TagKind:
    """
    Classify a tag by the function it serves; first matching rule wins

    Args:
        tag: Tag token (matched case-insensitively)
        lexicons: Word lists (bundled defaults when omitted)

    Returns:
        TagKind, TOPIC when nothing else matches
    """
    if not tag:
        raise ArgumentError("cannot classify an empty tag")
    words = lexicons or DEFAULT_LEXICONS
    folded = tag.casefold()

    if folded.startswith("my"):
        return TagKind.SELF_REFERENCE
    if folded in words.task:
        return TagKind.TASK
    if NUMERIC_TAG.match(folded):
        return TagKind.REFINEMENT
    if folded in words.what_it_is:
        return TagKind.WHAT_IT_IS
    if folded in words.quality:
        return TagKind.QUALITY
    if folded in words.ownership or folded.startswith("by:"):
        return TagKind.OWNERSHIP
    return TagKind.TOPIC


def tag_kind_summary(dataset: Dataset, lexicons: Optional[Lexicons] = None) -> TagKindSummary:
    """Tag tokens and distinct tags per kind, with the personal/extrinsic split"""
    tokens: Counter = Counter()
    distinct: Dict[TagKind, set] = defaultdict(set)
    for bookmark in dataset.bookmarks:
        for tag in bookmark.tags:
            kind = classify_tag_kind(tag, lexicons)
            tokens[kind] += 1
            distinct[kind].add(tag)

    personal = sum(count for kind, count in tokens.items() if kind.is_personal)
    return TagKindSummary(
        token_counts={kind: tokens[kind] for kind in TagKind},
        distinct_tags={kind: len(distinct[kind]) for kind in TagKind},
        personal_tokens=personal,
        extrinsic_tokens=sum(tokens.values()) - personal,
    )
