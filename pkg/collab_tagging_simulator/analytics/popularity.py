"""
Popularity Analysis - Bookmarking Trends
Daily bookmark counts per URL, peak detection and peak-day buckets
"""

import logging
from collections import Counter
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from collab_tagging_simulator.core.data_models import (
    BucketShare, Dataset, PeakBucket, PeakBucketSummary, PeakReport, UrlHistory
)
from collab_tagging_simulator.core.exceptions import EmptyInputError

logger = logging.getLogger(__name__)


def day_offsets(history: UrlHistory) -> np.ndarray:
    """Calendar days (UTC) since the history's first bookmark; its day is 0"""
    if history.length == 0:
        raise EmptyInputError(f"history {history.key!r} has no bookmarks")
    first = history.entries[0].timestamp.date()
    return np.array(
        [(b.timestamp.date() - first).days for b in history.entries],
        dtype=np.int64,
    )


def detect_peak(history: UrlHistory) -> PeakReport:
    """
    Find the day a URL was bookmarked most

    Args:
        history: Bookmarks of one URL

    Returns:
        PeakReport; the earliest day wins ties
    """
    daily = np.bincount(day_offsets(history))
    peak_day = int(np.argmax(daily))
    return PeakReport(
        key=history.key,
        peak_day=peak_day,
        bucket=PeakBucket.for_day(peak_day),
        daily_counts=tuple(int(n) for n in daily),
    )


def daily_activity(history: UrlHistory) -> pd.DataFrame:
    """Long-format arrivals: day, bookmarks, cumulative"""
    daily = np.bincount(day_offsets(history))
    return pd.DataFrame({
        "day": np.arange(len(daily)),
        "bookmarks": daily,
        "cumulative": np.cumsum(daily),
    })


def peak_bucket_summary(dataset: Dataset) -> PeakBucketSummary:
    """Peak reports of every URL in key order, with bucket shares"""
    if not dataset.by_url:
        raise EmptyInputError("dataset has no URLs")

    reports = [detect_peak(dataset.by_url[url]) for url in dataset.urls()]
    tally = Counter(report.bucket for report in reports)
    total = len(reports)
    buckets = {
        bucket: BucketShare(count=tally[bucket], fraction=tally[bucket] / total)
        for bucket in PeakBucket
        if tally[bucket]
    }
    logger.info(
        f"Classified {total} URLs: "
        + ", ".join(f"{bucket.value}={share.count}" for bucket, share in buckets.items())
    )
    return PeakBucketSummary(
        total_urls=total,
        buckets=buckets,
        longest_peak_day=max(report.peak_day for report in reports),
        reports=tuple(reports),
    )


def classify_peak_buckets(dataset: Dataset) -> Dict[PeakBucket, Tuple[int, float]]:
    """
    Share of URLs per peak bucket

    Returns:
        bucket -> (count, fraction) for buckets that occur, in bucket order
    """
    summary = peak_bucket_summary(dataset)
    return {bucket: (share.count, share.fraction) for bucket, share in summary.buckets.items()}
