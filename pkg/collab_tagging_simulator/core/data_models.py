"""
Data Models for the Collaborative Tagging Simulator
Pydantic models for type safety and validation
"""

import logging
import math
from collections import Counter
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from collab_tagging_simulator.core.config import Config

logger = logging.getLogger(__name__)

PROPORTION_TOLERANCE = 1e-9


def to_utc_seconds(value: datetime) -> datetime:
    """Normalize an instant to timezone-aware UTC at second resolution"""
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(value: datetime) -> str:
    """Canonical ISO-8601 UTC text, e.g. 2005-06-23T09:00:00Z"""
    return to_utc_seconds(value).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_iso(text: str) -> datetime:
    parsed = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no timezone")
    return parsed


def parse_timestamp(text: str, strict: bool = False) -> datetime:
    """
    Parse ISO-8601 text carrying a UTC designator or explicit offset

    Fractional seconds are truncated with a warning, or rejected when strict.
    """
    parsed = _parse_iso(text)
    if parsed.microsecond:
        if strict:
            raise ValueError(f"timestamp {text!r} has sub-second precision")
        logger.warning(f"Dropping sub-second precision from timestamp {text!r}")
    return to_utc_seconds(parsed)


# ============================================================================
# Enums
# ============================================================================

class QueryMode(str, Enum):
    ALL = "all"  # intersection: every query tag
    ANY = "any"  # union: at least one query tag


SIX_MONTHS_DAYS = 183


class PeakBucket(str, Enum):
    FIRST_DAY = "first_day"
    WITHIN_10_DAYS = "within_10_days"
    AFTER_6_MONTHS = "after_6_months"
    OTHER = "other"

    @classmethod
    def for_day(cls, peak_day: int) -> "PeakBucket":
        """Bucket of a peak day counted from the first bookmark (day 0)"""
        if peak_day == 0:
            return cls.FIRST_DAY
        if peak_day < 10:
            return cls.WITHIN_10_DAYS
        if peak_day >= SIX_MONTHS_DAYS:
            return cls.AFTER_6_MONTHS
        return cls.OTHER


class TagKind(str, Enum):
    TOPIC = "topic"
    WHAT_IT_IS = "what_it_is"
    OWNERSHIP = "ownership"
    REFINEMENT = "refinement"
    QUALITY = "quality"
    SELF_REFERENCE = "self_reference"
    TASK = "task"

    @property
    def is_personal(self) -> bool:
        """Quality, self-reference and task tags only make sense relative to the tagger"""
        return self in (TagKind.QUALITY, TagKind.SELF_REFERENCE, TagKind.TASK)


# ============================================================================
# Bookmark Models
# ============================================================================

class Bookmark(BaseModel):
    """One tagging event"""
    model_config = ConfigDict(frozen=True)

    user: str = Field(..., min_length=1, description="Opaque user identifier")
    url: str = Field(..., min_length=1, description="Opaque resource identifier")
    timestamp: datetime = Field(..., description="UTC instant, second resolution")
    tags: Tuple[str, ...] = Field(default=(), description="Tags in entry order")

    @field_validator("timestamp")
    @classmethod
    def _normalize_timestamp(cls, value: datetime) -> datetime:
        return to_utc_seconds(value)

    @field_validator("tags")
    @classmethod
    def _check_tags(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if any(not tag for tag in value):
            raise ValueError("tag tokens must be non-empty")
        duplicates = [tag for tag, count in Counter(value).items() if count > 1]
        if duplicates:
            raise ValueError(f"duplicate tag tokens within one bookmark: {duplicates}")
        return value


class History(BaseModel):
    """Time-ordered bookmarks sharing one key"""
    model_config = ConfigDict(frozen=True)

    key: str
    entries: Tuple[Bookmark, ...] = ()

    @model_validator(mode="after")
    def _check_order(self) -> "History":
        for previous, current in zip(self.entries, self.entries[1:]):
            if current.timestamp < previous.timestamp:
                raise ValueError(f"history {self.key!r} timestamps decrease at {current.timestamp}")
        return self

    @property
    def length(self) -> int:
        return len(self.entries)


class UrlHistory(History):
    """All bookmarks of one URL"""


class UserHistory(History):
    """All bookmarks of one user"""


class Dataset(BaseModel):
    """Bookmark collection indexed by URL and by user"""
    model_config = ConfigDict(frozen=True)

    bookmarks: Tuple[Bookmark, ...] = ()
    by_url: Dict[str, UrlHistory] = Field(default_factory=dict)
    by_user: Dict[str, UserHistory] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_partition(self) -> "Dataset":
        total = len(self.bookmarks)
        if sum(h.length for h in self.by_url.values()) != total:
            raise ValueError("per-URL histories do not partition the dataset")
        if sum(h.length for h in self.by_user.values()) != total:
            raise ValueError("per-user histories do not partition the dataset")
        return self

    @property
    def size(self) -> int:
        return len(self.bookmarks)

    def __len__(self) -> int:
        return self.size

    def urls(self) -> List[str]:
        return sorted(self.by_url)

    def users(self) -> List[str]:
        return sorted(self.by_user)


# ============================================================================
# Proportion Models
# ============================================================================

class ProportionVector(BaseModel):
    """Each tag's share of all tag tokens seen so far"""
    model_config = ConfigDict(frozen=True)

    fractions: Dict[str, float] = Field(default_factory=dict)
    token_total: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_fractions(self) -> "ProportionVector":
        if self.token_total == 0:
            if self.fractions:
                raise ValueError("a vector without tokens must be empty")
            return self
        if any(not 0.0 <= f <= 1.0 for f in self.fractions.values()):
            raise ValueError("fractions must lie in [0, 1]")
        if abs(math.fsum(self.fractions.values()) - 1.0) > PROPORTION_TOLERANCE:
            raise ValueError("fractions must sum to 1")
        return self

    def get(self, tag: str) -> float:
        return self.fractions.get(tag, 0.0)


class ProportionTrajectory(BaseModel):
    """Cumulative proportion vectors, element t-1 covering bookmarks 1..t"""
    model_config = ConfigDict(frozen=True)

    key: str = ""
    vectors: Tuple[ProportionVector, ...] = ()

    @model_validator(mode="after")
    def _check_growth(self) -> "ProportionTrajectory":
        for t, (previous, current) in enumerate(zip(self.vectors, self.vectors[1:]), start=2):
            if current.token_total < previous.token_total:
                raise ValueError(f"token_total decreases at bookmark {t}")
            if not previous.fractions.keys() <= current.fractions.keys():
                raise ValueError(f"tag set shrinks at bookmark {t}")
        return self

    @property
    def length(self) -> int:
        return len(self.vectors)

    def tags(self) -> List[str]:
        """Tags in order of first appearance"""
        seen: Dict[str, None] = {}
        for vector in self.vectors:
            for tag in vector.fractions:
                seen.setdefault(tag, None)
        return list(seen)

    def as_matrix(self, tags: Optional[List[str]] = None) -> np.ndarray:
        """Bookmarks x tags matrix of proportions; absent tags are 0.0"""
        columns = tags if tags is not None else self.tags()
        matrix = np.zeros((len(self.vectors), len(columns)), dtype=float)
        for row, vector in enumerate(self.vectors):
            for col, tag in enumerate(columns):
                matrix[row, col] = vector.fractions.get(tag, 0.0)
        return matrix


# ============================================================================
# Urn Models
# ============================================================================

class UrnState(BaseModel):
    """Ball counts of a reinforcement urn after ``step`` draws"""
    model_config = ConfigDict(frozen=True)

    counts: Dict[str, int]
    step: int = Field(default=0, ge=0, description="Reinforcement steps performed")

    @model_validator(mode="after")
    def _check_counts(self) -> "UrnState":
        if not self.counts:
            raise ValueError("an urn needs at least one color")
        if any(count < 1 for count in self.counts.values()):
            raise ValueError("every color needs at least one ball")
        if self.total - self.step < len(self.counts):
            raise ValueError("step exceeds the balls added since the initial state")
        return self

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def initial_total(self) -> int:
        return self.total - self.step

    @property
    def colors(self) -> List[str]:
        return list(self.counts)

    def exact_fraction(self, color: str) -> Fraction:
        return Fraction(self.counts[color], self.total)

    def fractions(self) -> Dict[str, float]:
        total = self.total
        return {color: count / total for color, count in self.counts.items()}


class UrnTrajectory(BaseModel):
    """Per-step ball counts of one urn run, step 0 being the initial state"""
    model_config = ConfigDict(frozen=True)

    colors: Tuple[str, ...]
    counts: Tuple[Tuple[int, ...], ...]
    seed: str = Field(..., description="Seed path the run was drawn from")

    @model_validator(mode="after")
    def _check_steps(self) -> "UrnTrajectory":
        if not self.counts:
            raise ValueError("a trajectory holds at least the initial state")
        matrix = np.asarray(self.counts, dtype=np.int64)
        if matrix.shape[1] != len(self.colors):
            raise ValueError("count rows must match the colors")
        if len(matrix) > 1:
            steps = np.diff(matrix, axis=0)
            if not (np.all(steps >= 0) and np.all(steps.sum(axis=1) == 1)):
                raise ValueError("each step must add exactly one ball")
        return self

    @property
    def steps(self) -> int:
        return len(self.counts) - 1

    def fraction_vector(self, step: int) -> Dict[str, float]:
        row = self.counts[step]
        total = sum(row)
        return {color: count / total for color, count in zip(self.colors, row)}

    def fraction_vectors(self) -> List[Dict[str, float]]:
        return [self.fraction_vector(t) for t in range(len(self.counts))]

    def terminal_fraction(self, color: Optional[str] = None) -> float:
        row = self.counts[-1]
        index = self.colors.index(color) if color is not None else 0
        return row[index] / sum(row)

    def final_state(self) -> UrnState:
        return UrnState(counts=dict(zip(self.colors, self.counts[-1])), step=self.steps)


class FractionDistribution(BaseModel):
    """Exact law of one color's fraction after a fixed number of draws"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    color: str
    steps: int = Field(..., ge=0)
    atoms: Dict[Fraction, Fraction]

    @model_validator(mode="after")
    def _check_mass(self) -> "FractionDistribution":
        if sum(self.atoms.values(), Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        return self

    def probability(self, fraction: Fraction) -> Fraction:
        return self.atoms.get(Fraction(fraction), Fraction(0))


# ============================================================================
# Tag Stream Simulation Models
# ============================================================================

class ArrivalSegment(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    duration_days: float = Field(..., gt=0)
    rate_per_day: float = Field(..., ge=0)


class Burst(BaseModel):
    """Exogenous popularity jump multiplying the base rate inside a window"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    start_day: float = Field(..., ge=0)
    multiplier: float = Field(..., ge=0)
    duration_days: float = Field(..., gt=0)

    @property
    def end_day(self) -> float:
        return self.start_day + self.duration_days


class ArrivalSchedule(BaseModel):
    """Piecewise-constant bookmark rate with an optional burst"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    segments: Tuple[ArrivalSegment, ...] = Field(..., min_length=1)
    burst: Optional[Burst] = None

    @field_validator("segments", mode="before")
    @classmethod
    def _accept_pairs(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return [
                {"duration_days": item[0], "rate_per_day": item[1]}
                if isinstance(item, (list, tuple)) else item
                for item in value
            ]
        return value

    @field_validator("burst", mode="before")
    @classmethod
    def _accept_triple(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return {"start_day": value[0], "multiplier": value[1], "duration_days": value[2]}
        return value

    @classmethod
    def constant(cls, rate_per_day: float, duration_days: float = 365.0) -> "ArrivalSchedule":
        return cls(segments=[(duration_days, rate_per_day)])

    @property
    def schedule_end(self) -> float:
        return sum(segment.duration_days for segment in self.segments)

    def base_rate_at(self, day: float) -> float:
        """Rate of the segment covering ``day``; the last segment's rate continues past the end"""
        elapsed = 0.0
        for segment in self.segments:
            elapsed += segment.duration_days
            if day < elapsed:
                return segment.rate_per_day
        return self.segments[-1].rate_per_day

    def rate_at(self, day: float) -> float:
        rate = self.base_rate_at(day)
        if self.burst is not None and self.burst.start_day <= day < self.burst.end_day:
            rate *= self.burst.multiplier
        return rate

    def max_rate(self) -> float:
        peak = max(segment.rate_per_day for segment in self.segments)
        if self.burst is not None:
            peak *= max(self.burst.multiplier, 1.0)
        return peak


class SimConfig(BaseModel):
    """Generative model parameters for one URL's bookmark stream"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    imitation_prob: float = Field(..., ge=0.0, le=1.0, description="Chance a slot imitates displayed tags")
    top_k: int = Field(..., ge=1, description="Number of popular tags displayed")
    shared_vocab: Dict[str, float] = Field(..., min_length=1, description="Shared background vocabulary")
    innovation_prob: float = Field(default=0.0, ge=0.0, le=1.0, description="Chance a slot mints a new tag")
    tags_per_bookmark: Dict[int, float] = Field(default_factory=lambda: {1: 1 / 3, 2: 1 / 3, 3: 1 / 3})
    total_bookmarks: int = Field(..., ge=1)
    arrival: ArrivalSchedule
    seed: int = Field(default=0, ge=0)
    initial_tag_counts: Dict[str, int] = Field(default_factory=dict, description="Pre-seeded urn counts")
    url: str = Field(default="http://sim.example/url0", min_length=1)
    start_time: datetime = Field(default=datetime(2005, 1, 1, tzinfo=timezone.utc))
    redraw_limit: int = Field(default=100, ge=1)

    @field_validator("shared_vocab")
    @classmethod
    def _check_vocab(cls, value: Dict[str, float]) -> Dict[str, float]:
        if any(not tag for tag in value) or any(p < 0 for p in value.values()):
            raise ValueError("vocabulary tags must be non-empty with non-negative probabilities")
        if abs(math.fsum(value.values()) - 1.0) > PROPORTION_TOLERANCE:
            raise ValueError("shared_vocab probabilities must sum to 1")
        return value

    @field_validator("tags_per_bookmark")
    @classmethod
    def _check_tag_counts(cls, value: Dict[int, float]) -> Dict[int, float]:
        if not value or any(m < 0 for m in value) or any(p < 0 for p in value.values()):
            raise ValueError("tags_per_bookmark needs non-negative counts and probabilities")
        if abs(math.fsum(value.values()) - 1.0) > PROPORTION_TOLERANCE:
            raise ValueError("tags_per_bookmark probabilities must sum to 1")
        return dict(sorted(value.items()))

    @field_validator("initial_tag_counts")
    @classmethod
    def _check_initial_counts(cls, value: Dict[str, int]) -> Dict[str, int]:
        if any(not tag for tag in value) or any(count < 1 for count in value.values()):
            raise ValueError("initial tag counts must be >= 1 for non-empty tags")
        return value

    @field_validator("start_time")
    @classmethod
    def _normalize_start(cls, value: datetime) -> datetime:
        return to_utc_seconds(value)

    @classmethod
    def from_defaults(cls, **overrides: Any) -> "SimConfig":
        """Config-driven defaults with explicit overrides"""
        values = Config.get_sim_config()
        values["arrival"] = Config.get_arrival_config()
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @classmethod
    def urn_pure(
        cls,
        colors: Tuple[str, ...] = ("red", "black"),
        total_bookmarks: int = 8,
        seed: int = 0,
        url: str = "http://sim.example/urn0"
    ) -> "SimConfig":
        """Configuration under which the tag process is the classic Polya urn"""
        return cls(
            imitation_prob=1.0,
            top_k=len(colors),
            shared_vocab={color: 1.0 / len(colors) for color in colors},
            innovation_prob=0.0,
            tags_per_bookmark={1: 1.0},
            total_bookmarks=total_bookmarks,
            arrival=ArrivalSchedule.constant(Config.ARRIVAL_RATE_PER_DAY, Config.ARRIVAL_DURATION_DAYS),
            seed=seed,
            initial_tag_counts={color: 1 for color in colors},
            url=url,
        )


class TagCountState(BaseModel):
    """Cumulative tag token counts of one URL"""

    counts: Dict[str, int] = Field(default_factory=dict)
    total: int = Field(default=0, ge=0)
    minted: int = Field(default=0, ge=0, description="Fresh tags issued so far")

    @model_validator(mode="after")
    def _check_total(self) -> "TagCountState":
        if any(count < 1 for count in self.counts.values()):
            raise ValueError("present tags need a count >= 1")
        if self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")
        return self

    @classmethod
    def from_counts(cls, counts: Dict[str, int]) -> "TagCountState":
        return cls(counts=dict(counts), total=sum(counts.values()))

    @property
    def is_empty(self) -> bool:
        return self.total == 0

    def count(self, tag: str) -> int:
        return self.counts.get(tag, 0)

    def top(self, k: int) -> List[Tuple[str, int]]:
        """The k most used tags, ties broken lexicographically"""
        return sorted(self.counts.items(), key=lambda item: (-item[1], item[0]))[:k]

    def record(self, tags: Tuple[str, ...]) -> None:
        for tag in tags:
            self.counts[tag] = self.counts.get(tag, 0) + 1
        self.total += len(tags)


# ============================================================================
# Analysis Report Models
# ============================================================================

class StabilityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    key: str = ""
    stabilization_index: Optional[int] = Field(default=None, ge=1)
    epsilon: float = Field(..., gt=0)
    window: int = Field(..., ge=2)
    trajectory_length: int = Field(..., ge=0)
    final_proportions: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_index(self) -> "StabilityReport":
        if self.stabilization_index is not None:
            if self.stabilization_index + self.window > self.trajectory_length:
                raise ValueError("stabilization index leaves no room for a full window")
        return self

    @property
    def stabilized(self) -> bool:
        return self.stabilization_index is not None


class PeakReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    key: str = ""
    peak_day: int = Field(..., ge=0, description="Whole days since the first bookmark")
    bucket: PeakBucket
    daily_counts: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_bucket(self) -> "PeakReport":
        if self.bucket is not PeakBucket.for_day(self.peak_day):
            raise ValueError(f"bucket {self.bucket.value} does not match peak day {self.peak_day}")
        return self

    @property
    def peak_count(self) -> int:
        return self.daily_counts[self.peak_day]


class BucketShare(BaseModel):
    model_config = ConfigDict(frozen=True)

    count: int = Field(..., ge=0)
    fraction: float = Field(..., ge=0.0, le=1.0)


class PeakBucketSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    total_urls: int = Field(..., ge=0)
    buckets: Dict[PeakBucket, BucketShare]
    longest_peak_day: int = Field(..., ge=0)
    reports: Tuple[PeakReport, ...] = ()


class PositionRankReport(BaseModel):
    """Median frequency rank of the tags found at each in-bookmark position"""
    model_config = ConfigDict(frozen=True)

    key: str = ""
    median_ranks: Dict[int, int] = Field(default_factory=dict, description="position -> lower median rank")
    observations: Dict[int, int] = Field(default_factory=dict, description="position -> tags observed")
    tag_ranks: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_ranks(self) -> "PositionRankReport":
        if any(rank < 1 for rank in self.median_ranks.values()):
            raise ValueError("ranks start at 1")
        return self

    def as_list(self) -> List[int]:
        return [self.median_ranks[position] for position in sorted(self.median_ranks)]

    def is_non_decreasing(self) -> bool:
        ranks = self.as_list()
        return all(a <= b for a, b in zip(ranks, ranks[1:]))


class UserActivity(BaseModel):
    model_config = ConfigDict(frozen=True)

    user: str
    account_age_days: int = Field(..., ge=0)
    active_days: int = Field(..., ge=1)
    bookmark_count: int = Field(..., ge=1)
    distinct_tag_count: int = Field(..., ge=0)
    tag_token_count: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_bounds(self) -> "UserActivity":
        if self.active_days > self.account_age_days + 1:
            raise ValueError("active days cannot exceed the account age plus one")
        if self.distinct_tag_count > self.tag_token_count:
            raise ValueError("distinct tags cannot exceed tag tokens")
        return self


class RegressionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    r2: float = Field(..., ge=0.0, le=1.0)
    n: int = Field(..., ge=3)


class ActivityStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    as_of: datetime
    users: Tuple[UserActivity, ...]
    age_vs_active_days: Optional[RegressionResult] = None
    bookmarks_vs_distinct_tags: Optional[RegressionResult] = None
    light_users_bookmarks_vs_tags: Optional[RegressionResult] = None
    heavy_users_bookmarks_vs_tags: Optional[RegressionResult] = None
    account_age_source: str = "first_bookmark_proxy"
    notes: Tuple[str, ...] = ()


class KSResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    statistic: float = Field(..., ge=0.0, le=1.0)
    n: int = Field(..., ge=1)
    alpha: float = Field(..., gt=0.0, lt=1.0)
    critical_value: float
    passed: bool
    p_value: float = Field(..., ge=0.0, le=1.0)


DEFAULT_WHAT_IT_IS = (
    "article", "blog", "book", "video", "podcast", "tutorial", "howto", "reference",
    "news", "paper", "wiki", "forum", "software", "tool", "tools", "comic", "photo", "photos",
)
DEFAULT_QUALITY = (
    "scary", "funny", "stupid", "inspirational", "cool", "interesting", "useful", "awesome",
    "great", "fun", "boring", "important", "good", "weird",
)
DEFAULT_TASK = ("toread", "jobsearch", "todo", "to_read", "readlater", "toblog", "tobuy", "toprint", "towatch")
DEFAULT_OWNERSHIP = ("microsoft", "google", "apple", "yahoo", "ibm", "nytimes", "bbc", "wired", "slashdot")


class Lexicons(BaseModel):
    """Word lists driving tag-kind classification"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    what_it_is: FrozenSet[str] = Field(default_factory=lambda: frozenset(DEFAULT_WHAT_IT_IS))
    quality: FrozenSet[str] = Field(default_factory=lambda: frozenset(DEFAULT_QUALITY))
    task: FrozenSet[str] = Field(default_factory=lambda: frozenset(DEFAULT_TASK))
    ownership: FrozenSet[str] = Field(default_factory=lambda: frozenset(DEFAULT_OWNERSHIP))

    @field_validator("what_it_is", "quality", "task", "ownership")
    @classmethod
    def _fold_case(cls, value: FrozenSet[str]) -> FrozenSet[str]:
        return frozenset(word.casefold() for word in value)


class TagKindSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    token_counts: Dict[TagKind, int]
    distinct_tags: Dict[TagKind, int]
    personal_tokens: int = Field(..., ge=0)
    extrinsic_tokens: int = Field(..., ge=0)


# ============================================================================
# IO Models
# ============================================================================

class BookmarkLogRecord(BaseModel):
    """One line of a bookmark log"""
    model_config = ConfigDict(extra="forbid")

    ts: str
    user: str = Field(..., min_length=1)
    url: str = Field(..., min_length=1)
    tags: List[str] = Field(default_factory=list)

    @field_validator("ts")
    @classmethod
    def _check_ts(cls, value: str) -> str:
        _parse_iso(value)
        return value

    @field_validator("url")
    @classmethod
    def _check_url(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("url must not be blank")
        return value

    @classmethod
    def from_bookmark(cls, bookmark: Bookmark) -> "BookmarkLogRecord":
        return cls(
            ts=format_timestamp(bookmark.timestamp),
            user=bookmark.user,
            url=bookmark.url,
            tags=list(bookmark.tags),
        )


class GroundTruthRecord(BaseModel):
    """One planted fact of a generated fixture"""

    kind: str
    key: str
    values: Dict[str, Any] = Field(default_factory=dict)


class Fixture(BaseModel):
    """A generated bookmark log with the facts planted in it"""
    model_config = ConfigDict(frozen=True)

    profile: str
    seed: int = Field(..., ge=0)
    bookmarks: Tuple[Bookmark, ...]
    ground_truth: Tuple[GroundTruthRecord, ...]


class SimulationParams(BaseModel):
    """Optional overrides of SimConfig fields inside a run config file"""
    model_config = ConfigDict(extra="forbid")

    imitation_prob: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    top_k: Optional[int] = Field(default=None, ge=1)
    shared_vocab: Optional[Dict[str, float]] = None
    innovation_prob: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    tags_per_bookmark: Optional[Dict[int, float]] = None
    total_bookmarks: Optional[int] = Field(default=None, ge=1)
    arrival: Optional[ArrivalSchedule] = None
    initial_tag_counts: Optional[Dict[str, int]] = None
    url: Optional[str] = None
    start_time: Optional[datetime] = None
    redraw_limit: Optional[int] = Field(default=None, ge=1)
    urls: int = Field(default=1, ge=1, description="Independent URL streams to simulate")


class AnalysisParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(default_factory=lambda: Config.ANALYSIS_EPSILON, gt=0.0)
    window: int = Field(default_factory=lambda: Config.ANALYSIS_WINDOW, ge=2)
    alpha: float = Field(default_factory=lambda: Config.KS_ALPHA, gt=0.0, lt=1.0)


class RunConfig(BaseModel):
    """File-based run configuration; unknown keys are rejected"""
    model_config = ConfigDict(extra="forbid")

    simulation: SimulationParams = Field(default_factory=SimulationParams)
    analysis: AnalysisParams = Field(default_factory=AnalysisParams)
    normalize_case: bool = False
    strict: bool = False
    seed: int = Field(default_factory=lambda: Config.DEFAULT_SEED, ge=0)

    def sim_config(self, seed: Optional[int] = None) -> SimConfig:
        overrides = self.simulation.model_dump(exclude={"urls"}, exclude_none=True)
        overrides["seed"] = self.seed if seed is None else seed
        if "arrival" in overrides:
            overrides["arrival"] = self.simulation.arrival
        return SimConfig.from_defaults(**overrides)


# ============================================================================
# Orchestration Models
# ============================================================================

class LimitLawStudy(BaseModel):
    """Uniformity checks of urn limit fractions across meta-seeds"""

    initial_counts: Dict[str, int]
    color: str
    steps: int
    replicates: int
    alpha: float
    meta_seeds: List[int]
    results: List[KSResult] = Field(default_factory=list)
    sample_means: List[float] = Field(default_factory=list)

    @computed_field
    @property
    def pass_count(self) -> int:
        return sum(1 for result in self.results if result.passed)


class SeedSweepStudy(BaseModel):
    """One per-seed outcome of a simulated-stream analysis"""

    name: str
    seeds: List[int]
    values: List[Optional[float]] = Field(default_factory=list)
    passed: List[bool] = Field(default_factory=list)
    threshold: Optional[float] = None

    @computed_field
    @property
    def pass_count(self) -> int:
        return sum(self.passed)

    @computed_field
    @property
    def pass_rate(self) -> float:
        return self.pass_count / len(self.passed) if self.passed else 0.0


class UrnReductionStudy(BaseModel):
    """Tag-stream vs exact urn terminal-fraction histograms"""

    steps: int
    replicates: int
    exact: Dict[str, float]
    empirical: Dict[str, float]

    @computed_field
    @property
    def max_abs_error(self) -> float:
        keys = set(self.exact) | set(self.empirical)
        return max(abs(self.exact.get(k, 0.0) - self.empirical.get(k, 0.0)) for k in keys)
