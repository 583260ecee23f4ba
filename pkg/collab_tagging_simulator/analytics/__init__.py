"""Collaborative Tagging Simulator - Analytics"""

from collab_tagging_simulator.analytics.popularity import (
    classify_peak_buckets, daily_activity, detect_peak, peak_bucket_summary
)
from collab_tagging_simulator.analytics.stabilization import detect_stabilization
from collab_tagging_simulator.analytics.statistics import ks_statistic, ols_r2
from collab_tagging_simulator.analytics.tag_structure import (
    classify_tag_kind, position_rank_analysis, tag_kind_summary
)
from collab_tagging_simulator.analytics.user_activity import (
    distinct_tag_growth, tag_growth_curve, user_activity_stats, user_tag_counts
)

__all__ = [
    "classify_peak_buckets",
    "classify_tag_kind",
    "daily_activity",
    "detect_peak",
    "detect_stabilization",
    "distinct_tag_growth",
    "ks_statistic",
    "ols_r2",
    "peak_bucket_summary",
    "position_rank_analysis",
    "tag_growth_curve",
    "tag_kind_summary",
    "user_activity_stats",
    "user_tag_counts",
]
