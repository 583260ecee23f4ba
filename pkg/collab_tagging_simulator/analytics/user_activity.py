"""
User Activity Analysis
Per-user account age, active days and tag vocabulary, with the regressions
relating them, and per-user tag growth curves
"""

import logging
from datetime import datetime
from typing import List, Optional, Sequence, Tuple

import numpy as np

from collab_tagging_simulator.analytics.statistics import ols_r2
from collab_tagging_simulator.core.data_models import (
    ActivityStats, Dataset, RegressionResult, UserActivity, UserHistory, to_utc_seconds
)
from collab_tagging_simulator.core.exceptions import DegenerateInputError, EmptyInputError, InsufficientDataError

logger = logging.getLogger(__name__)

LIGHT_USER_MAX_BOOKMARKS = 30
HEAVY_USER_MIN_BOOKMARKS = 500
MIN_REGRESSION_USERS = 3


def _activity(user: str, history: UserHistory, as_of: datetime) -> Optional[UserActivity]:
    entries = [b for b in history.entries if b.timestamp <= as_of]
    if not entries:
        return None
    tokens = [tag for bookmark in entries for tag in bookmark.tags]
    return UserActivity(
        user=user,
        account_age_days=(as_of.date() - entries[0].timestamp.date()).days,
        active_days=len({bookmark.timestamp.date() for bookmark in entries}),
        bookmark_count=len(entries),
        distinct_tag_count=len(set(tokens)),
        tag_token_count=len(tokens),
    )


def _regress(label: str, users: Sequence[UserActivity], x_field: str, y_field: str, notes: List[str]) -> Optional[RegressionResult]:
    if len(users) < MIN_REGRESSION_USERS:
        notes.append(f"{label}: fewer than {MIN_REGRESSION_USERS} users")
        return None
    try:
        return ols_r2([getattr(u, x_field) for u in users], [getattr(u, y_field) for u in users])
    except DegenerateInputError as exc:
        logger.warning(f"Skipping {label} regression: {exc}")
        notes.append(f"{label}: {exc}")
        return None


def user_activity_stats(dataset: Dataset, as_of: Optional[datetime] = None) -> ActivityStats:
    """
    Activity tuples per user and the regressions between them

    Account age is measured from the user's first bookmark, since logs carry no
    signup time; this underestimates true age. Bookmarks after ``as_of`` are ignored.

    Args:
        dataset: Bookmarks to analyze
        as_of: Reference instant (defaults to the latest bookmark)

    Returns:
        ActivityStats; raises InsufficientDataError (with ``partial``) for fewer than 3 users
    """
    if dataset.size == 0:
        raise EmptyInputError("dataset has no bookmarks")
    as_of = to_utc_seconds(as_of) if as_of is not None else dataset.bookmarks[-1].timestamp

    users = tuple(
        activity for activity in (
            _activity(user, dataset.by_user[user], as_of) for user in dataset.users()
        )
        if activity is not None
    )
    notes: List[str] = []

    if len(users) < MIN_REGRESSION_USERS:
        partial = ActivityStats(as_of=as_of, users=users, notes=(f"only {len(users)} users active by {as_of}",))
        raise InsufficientDataError(
            f"regressions need at least {MIN_REGRESSION_USERS} users, got {len(users)}", partial=partial
        )

    light = [u for u in users if u.bookmark_count < LIGHT_USER_MAX_BOOKMARKS]
    heavy = [u for u in users if u.bookmark_count > HEAVY_USER_MIN_BOOKMARKS]
    stats = ActivityStats(
        as_of=as_of,
        users=users,
        age_vs_active_days=_regress("age_vs_active_days", users, "account_age_days", "active_days", notes),
        bookmarks_vs_distinct_tags=_regress(
            "bookmarks_vs_distinct_tags", users, "bookmark_count", "distinct_tag_count", notes
        ),
        light_users_bookmarks_vs_tags=_regress(
            "light_users_bookmarks_vs_tags", light, "bookmark_count", "distinct_tag_count", notes
        ),
        heavy_users_bookmarks_vs_tags=_regress(
            "heavy_users_bookmarks_vs_tags", heavy, "bookmark_count", "distinct_tag_count", notes
        ),
        notes=tuple(notes),
    )
    logger.info(f"Activity stats for {len(users)} users as of {as_of}")
    return stats


def tag_growth_curve(history: UserHistory, tag: str) -> List[int]:
    """Element t-1 counts bookmarks 1..t that carry the tag"""
    if history.length == 0:
        raise EmptyInputError(f"history {history.key!r} has no bookmarks")
    hits = np.fromiter((tag in bookmark.tags for bookmark in history.entries), dtype=np.int64, count=history.length)
    return [int(n) for n in np.cumsum(hits)]


def distinct_tag_growth(history: UserHistory) -> List[int]:
    """Distinct tags used in bookmarks 1..t, for every t"""
    seen = set()
    curve = []
    for bookmark in history.entries:
        seen.update(bookmark.tags)
        curve.append(len(seen))
    return curve


def user_tag_counts(dataset: Dataset) -> List[Tuple[str, int]]:
    """Distinct tags per user, largest vocabulary first"""
    counts = [
        (user, len({tag for bookmark in dataset.by_user[user].entries for tag in bookmark.tags}))
        for user in dataset.users()
    ]
    return sorted(counts, key=lambda item: (-item[1], item[0]))
