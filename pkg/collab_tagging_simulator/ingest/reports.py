"""
Report Export - CSV and JSON Renderings of Analysis Results
Tables are long/tidy pandas frames so external plotters can consume them directly
"""

import json
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Union

import pandas as pd
from pydantic import BaseModel

from collab_tagging_simulator.analytics.user_activity import tag_growth_curve
from collab_tagging_simulator.core.data_models import (
    ActivityStats, FractionDistribution, KSResult, LimitLawStudy, PeakBucketSummary,
    PositionRankReport, ProportionTrajectory, StabilityReport, TagKindSummary, UrnTrajectory, UserHistory
)
from collab_tagging_simulator.core.exceptions import ArgumentError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def stability_frame(reports: Iterable[StabilityReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "url": report.key,
                "stabilization_index": report.stabilization_index,
                "epsilon": report.epsilon,
                "window": report.window,
                "bookmarks": report.trajectory_length,
            }
            for report in reports
        ],
        columns=["url", "stabilization_index", "epsilon", "window", "bookmarks"],
    ).astype({"stabilization_index": "Int64"})


def peak_bucket_frame(summary: PeakBucketSummary) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"bucket": bucket.value, "count": share.count, "fraction": share.fraction}
            for bucket, share in summary.buckets.items()
        ],
        columns=["bucket", "count", "fraction"],
    )


def peak_report_frame(summary: PeakBucketSummary) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"url": r.key, "peak_day": r.peak_day, "bucket": r.bucket.value, "peak_count": r.peak_count}
            for r in summary.reports
        ],
        columns=["url", "peak_day", "bucket", "peak_count"],
    )


def position_rank_frame(reports: Iterable[PositionRankReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "url": report.key,
                "position": position,
                "median_rank": rank,
                "observations": report.observations[position],
            }
            for report in reports
            for position, rank in sorted(report.median_ranks.items())
        ],
        columns=["url", "position", "median_rank", "observations"],
    )


def user_activity_frame(stats: ActivityStats) -> pd.DataFrame:
    columns = ["user", "account_age_days", "active_days", "bookmark_count", "distinct_tag_count", "tag_token_count"]
    return pd.DataFrame([user.model_dump() for user in stats.users], columns=columns)


def tag_kind_frame(summary: TagKindSummary) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "kind": kind.value,
                "tokens": summary.token_counts[kind],
                "distinct_tags": summary.distinct_tags[kind],
                "personal": kind.is_personal,
            }
            for kind in summary.token_counts
        ],
        columns=["kind", "tokens", "distinct_tags", "personal"],
    )


def fraction_distribution_frame(distribution: FractionDistribution) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "fraction": float(fraction),
                "probability": float(probability),
                "fraction_exact": str(fraction),
                "probability_exact": str(probability),
            }
            for fraction, probability in distribution.atoms.items()
        ],
        columns=["fraction", "probability", "fraction_exact", "probability_exact"],
    )


def urn_trajectory_frame(trajectory: UrnTrajectory) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"step": step, "color": color, "count": count, "fraction": count / sum(row)}
            for step, row in enumerate(trajectory.counts)
            for color, count in zip(trajectory.colors, row)
        ],
        columns=["step", "color", "count", "fraction"],
    )


def limit_law_frame(study: LimitLawStudy) -> pd.DataFrame:
    rows = []
    for meta_seed, result, mean in zip(study.meta_seeds, study.results, study.sample_means):
        rows.append({"meta_seed": meta_seed, "sample_mean": mean, **_ks_row(result)})
    return pd.DataFrame(rows, columns=["meta_seed", "sample_mean", "statistic", "critical_value", "p_value", "passed"])


def _ks_row(result: KSResult) -> dict:
    return {
        "statistic": result.statistic,
        "critical_value": result.critical_value,
        "p_value": result.p_value,
        "passed": result.passed,
    }


def proportion_chart_frame(trajectory: ProportionTrajectory) -> pd.DataFrame:
    """bookmark_index, tag, proportion for every bookmark and every tag seen by then"""
    return pd.DataFrame(
        [
            {"bookmark_index": t, "tag": tag, "proportion": fraction}
            for t, vector in enumerate(trajectory.vectors, start=1)
            for tag, fraction in vector.fractions.items()
        ],
        columns=["bookmark_index", "tag", "proportion"],
    )


def growth_chart_frame(history: UserHistory, tags: Optional[List[str]] = None) -> pd.DataFrame:
    """bookmark_index, tag, count: cumulative bookmarks carrying each tag"""
    if tags is None:
        tags = sorted({tag for bookmark in history.entries for tag in bookmark.tags})
    frames = [
        pd.DataFrame({
            "bookmark_index": range(1, history.length + 1),
            "tag": tag,
            "count": tag_growth_curve(history, tag),
        })
        for tag in tags
    ]
    if not frames:
        return pd.DataFrame(columns=["bookmark_index", "tag", "count"])
    return pd.concat(frames, ignore_index=True)


def _native(value):
    # numpy scalars left in object columns
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render(result: Union[pd.DataFrame, BaseModel], fmt: str = "csv") -> str:
    """
    Render a table or model

    CSV uses a header row and minimal quoting; JSON keeps field order.
    Models render their JSON dump for both formats.
    """
    if fmt not in FORMATS:
        raise ArgumentError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    if isinstance(result, BaseModel):
        return json.dumps(result.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return result.to_csv(index=False, lineterminator="\n")
    records = result.astype(object).where(result.notna(), None).to_dict(orient="records")
    return json.dumps(records, indent=2, ensure_ascii=False, default=_native) + "\n"


def emit(text: str, output: Optional[Path] = None) -> None:
    """Write to a file, or to stdout when no path is given"""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Wrote report to {output}")
