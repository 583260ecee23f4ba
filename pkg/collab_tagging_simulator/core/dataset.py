"""
Dataset construction, tag proportions and tag queries
"""

import logging
from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Union

from collab_tagging_simulator.core.data_models import (
    Bookmark, Dataset, ProportionTrajectory, ProportionVector, QueryMode, UrlHistory, UserHistory
)
from collab_tagging_simulator.core.exceptions import (
    ArgumentError, BoundsError, EmptyInputError, RecordValidationError
)

logger = logging.getLogger(__name__)


def _check_record(position: int, bookmark: Bookmark) -> None:
    # Bookmarks made with model_construct skip pydantic validation
    if any(not tag for tag in bookmark.tags):
        raise RecordValidationError(
            f"record {position} (user={bookmark.user!r}, url={bookmark.url!r}) has an empty tag"
        )
    if len(set(bookmark.tags)) != len(bookmark.tags):
        raise RecordValidationError(
            f"record {position} (user={bookmark.user!r}, url={bookmark.url!r}) "
            f"repeats a tag: {list(bookmark.tags)}"
        )


def build_dataset(bookmarks: Iterable[Bookmark]) -> Dataset:
    """
    Index bookmarks by URL and by user

    Args:
        bookmarks: Bookmarks in input order

    Returns:
        Dataset sorted stably by timestamp, input order breaking ties
    """
    records = list(bookmarks)
    for position, bookmark in enumerate(records):
        _check_record(position, bookmark)

    ordered = sorted(records, key=lambda bookmark: bookmark.timestamp)

    url_entries: Dict[str, List[Bookmark]] = defaultdict(list)
    user_entries: Dict[str, List[Bookmark]] = defaultdict(list)
    for bookmark in ordered:
        url_entries[bookmark.url].append(bookmark)
        user_entries[bookmark.user].append(bookmark)

    dataset = Dataset(
        bookmarks=tuple(ordered),
        by_url={url: UrlHistory(key=url, entries=tuple(entries)) for url, entries in sorted(url_entries.items())},
        by_user={user: UserHistory(key=user, entries=tuple(entries)) for user, entries in sorted(user_entries.items())},
    )
    logger.debug(f"Built dataset: {dataset.size} bookmarks, {len(url_entries)} URLs, {len(user_entries)} users")
    return dataset


def _vector(counts: Counter, token_total: int) -> ProportionVector:
    if token_total == 0:
        return ProportionVector()
    return ProportionVector(
        fractions={tag: count / token_total for tag, count in counts.items()},
        token_total=token_total,
    )


def tag_proportions(history: UrlHistory, upto: int) -> ProportionVector:
    """Token-based proportions over bookmarks 1..upto of a history"""
    if not 1 <= upto <= history.length:
        raise BoundsError(f"upto={upto} outside 1..{history.length}")

    counts: Counter = Counter()
    for bookmark in history.entries[:upto]:
        counts.update(bookmark.tags)
    return _vector(counts, sum(counts.values()))


def proportion_trajectory(history: UrlHistory) -> ProportionTrajectory:
    """
    Cumulative proportion vector after every bookmark of a history

    Element t-1 equals tag_proportions(history, t); counts are carried forward
    rather than recomputed.
    """
    if history.length == 0:
        raise EmptyInputError(f"history {history.key!r} has no bookmarks")

    counts: Counter = Counter()
    token_total = 0
    vectors = []
    for bookmark in history.entries:
        counts.update(bookmark.tags)
        token_total += len(bookmark.tags)
        vectors.append(_vector(counts, token_total))

    return ProportionTrajectory(key=history.key, vectors=tuple(vectors))


def query_bookmarks(
    dataset: Dataset,
    tags: Iterable[str],
    mode: Union[QueryMode, str] = QueryMode.ALL
) -> List[Bookmark]:
    """
    Find bookmarks by tag

    Args:
        dataset: Dataset to search
        tags: Query tags
        mode: ALL for the intersection, ANY for the union

    Returns:
        Matching bookmarks in dataset order
    """
    query = set(tags)
    if not query:
        raise ArgumentError("query needs at least one tag")
    try:
        mode = QueryMode(mode)
    except ValueError as exc:
        raise ArgumentError(f"unknown query mode {mode!r}") from exc

    if mode is QueryMode.ALL:
        return [b for b in dataset.bookmarks if query.issubset(b.tags)]
    return [b for b in dataset.bookmarks if not query.isdisjoint(b.tags)]
