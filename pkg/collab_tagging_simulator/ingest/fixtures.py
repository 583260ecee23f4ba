"""
Fixture Generator - Synthetic Bookmark Logs With Ground Truth
Profiles imitate the shapes of real bookmarking datasets at reduced scale:

    popular-mix   URLs whose peak days follow a fixed bucket mix
    people-mix    users with planted activity tuples, incl. a late tag adopter
    urn-pure      URL streams produced under the urn-reduction configuration
    settle-mix    URLs whose tag proportions settle at a planted bookmark index
"""

import json
import logging
from datetime import date, datetime, time, timedelta, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from collab_tagging_simulator.core.data_models import (
    Bookmark, Fixture, GroundTruthRecord, PeakBucket, SimConfig, TagCountState, format_timestamp
)
from collab_tagging_simulator.core.exceptions import ArgumentError
from collab_tagging_simulator.core.rng import make_rng, sub_seed
from collab_tagging_simulator.ingest.bookmark_log import save_bookmark_log
from collab_tagging_simulator.simulation.tag_stream_generator import select_tags, simulate_url_streams
from collab_tagging_simulator.urn.polya_urn import exact_fraction_distribution, initial_urn

logger = logging.getLogger(__name__)

# Share of URLs per peak bucket in the popular-mix profile
PEAK_BUCKET_MIX = {
    PeakBucket.FIRST_DAY: 0.17,
    PeakBucket.WITHIN_10_DAYS: 0.50,
    PeakBucket.AFTER_6_MONTHS: 0.17,
    PeakBucket.OTHER: 0.16,
}
PEAK_DAY_RANGES = {
    PeakBucket.FIRST_DAY: (0, 0),
    PeakBucket.WITHIN_10_DAYS: (1, 9),
    PeakBucket.OTHER: (10, 182),
    PeakBucket.AFTER_6_MONTHS: (183, 1000),
}
FIXTURE_EPOCH = datetime(2005, 1, 1, tzinfo=timezone.utc)
PEOPLE_AS_OF = date(2005, 6, 23)
LATE_TAG = "tag3"
LATE_ADOPTER_BOOKMARKS = 3000
LATE_ADOPTER_FIRST_USE = 2500
REGRESSION_TOLERANCE = 1e-6
SETTLE_EPSILON = 0.05
SETTLE_WINDOW = 20


def bucket_plan(urls: int) -> Dict[PeakBucket, int]:
    """URLs per bucket; largest remainders absorb rounding"""
    raw = {bucket: share * urls for bucket, share in PEAK_BUCKET_MIX.items()}
    plan = {bucket: int(value) for bucket, value in raw.items()}
    by_remainder = sorted(raw, key=lambda bucket: plan[bucket] - raw[bucket])
    for bucket in by_remainder[:urls - sum(plan.values())]:
        plan[bucket] += 1
    return plan


def _popular_mix(seed: int, size: Optional[int]) -> Tuple[List[Bookmark], List[GroundTruthRecord], Dict]:
    urls = size or 100
    plan = bucket_plan(urls)
    buckets = [bucket for bucket in PeakBucket for _ in range(plan[bucket])]
    order = make_rng(sub_seed(seed, urls)).permutation(urls)
    tag_config = SimConfig.from_defaults()

    bookmarks: List[Bookmark] = []
    truth: List[GroundTruthRecord] = []
    for i in range(urls):
        rng = make_rng(sub_seed(seed, i))
        bucket = buckets[order[i]]
        low, high = PEAK_DAY_RANGES[bucket]
        peak_day = int(rng.integers(low, high + 1))
        peak_count = int(rng.integers(3, 13))
        last_day = peak_day + int(rng.integers(5, 61))
        url = f"http://popular.example/{i:04d}"
        start = FIXTURE_EPOCH + timedelta(days=int(rng.integers(0, 60)))

        # seconds since the first bookmark, which opens day 0 at second 0
        offsets: List[int] = []
        for day in range(last_day + 1):
            if day == peak_day:
                per_day = peak_count
            elif day == 0:
                per_day = 1
            else:
                per_day = int(rng.random() < 0.3)
            if per_day == 0:
                continue
            if day == 0:
                seconds = [0] + sorted(int(s) for s in rng.integers(1, 86_400, size=per_day - 1))
            else:
                seconds = sorted(int(s) for s in rng.integers(0, 86_400, size=per_day))
            offsets.extend(day * 86_400 + s for s in seconds)

        state = TagCountState()
        for j, offset in enumerate(offsets):
            tags = select_tags(state, tag_config, rng)
            state.record(tuple(tags))
            bookmarks.append(Bookmark(
                user=f"p{i:04d}u{j:03d}", url=url, timestamp=start + timedelta(seconds=offset), tags=tuple(tags)
            ))
        truth.append(GroundTruthRecord(
            kind="url_peak", key=url,
            values={"peak_day": peak_day, "bucket": bucket.value, "peak_count": peak_count, "bookmarks": len(offsets)},
        ))

    summary = {
        "urls": urls,
        "bucket_counts": {bucket.value: plan[bucket] for bucket in PeakBucket if plan[bucket]},
        "bucket_fractions": {bucket.value: plan[bucket] / urls for bucket in PeakBucket if plan[bucket]},
        "tolerances": {"bucket_counts": 0, "peak_day": 0},
    }
    return bookmarks, truth, summary


def settle_stream(lead: int, pairs: int) -> List[Tuple[str, ...]]:
    """
    Tag lists whose two-tag shares fall monotonically to one half

    ``lead`` bookmarks of "a", then ``lead`` of "b", then ``pairs`` bookmarks
    carrying both, which hold each share at exactly 1/2.
    """
    return [("a",)] * lead + [("b",)] * lead + [("a", "b")] * pairs


def settle_index(tag_lists: List[Tuple[str, ...]], epsilon: float, window: int) -> Tuple[Optional[int], bool]:
    """
    Exact settle index of a tag stream and whether any window range ties epsilon

    Shares are recounted as fractions; the index is the first start t in
    1..T-window whose window t..t+window-1 keeps every tag's range <= epsilon.
    """
    bound = Fraction(str(epsilon))
    tags = sorted({tag for tags in tag_lists for tag in tags})
    counts = dict.fromkeys(tags, 0)
    tokens = 0
    shares: List[Dict[str, Fraction]] = []
    for bookmark_tags in tag_lists:
        for tag in bookmark_tags:
            counts[tag] += 1
        tokens += len(bookmark_tags)
        shares.append({tag: Fraction(counts[tag], tokens) if tokens else Fraction(0) for tag in tags})

    tie = False
    for start in range(len(tag_lists) - window):
        rows = shares[start:start + window]
        spread = max(max(row[tag] for row in rows) - min(row[tag] for row in rows) for tag in tags)
        tie = tie or spread == bound
        if spread <= bound:
            return start + 1, tie
    return None, tie


def _settle_mix(seed: int, size: Optional[int]) -> Tuple[List[Bookmark], List[GroundTruthRecord], Dict]:
    urls = size or 20
    max_lead = int(SETTLE_WINDOW * (1 - SETTLE_EPSILON))

    bookmarks: List[Bookmark] = []
    truth: List[GroundTruthRecord] = []
    for i in range(urls):
        rng = make_rng(sub_seed(seed, i))
        pairs = SETTLE_WINDOW + int(rng.integers(0, 60))
        # a tie with epsilon would leave the float comparison to rounding
        while True:
            lead = int(rng.integers(2, max_lead))
            stream = settle_stream(lead, pairs)
            index, tie = settle_index(stream, SETTLE_EPSILON, SETTLE_WINDOW)
            if not tie:
                break

        url = f"http://settle.example/{i:04d}"
        start = FIXTURE_EPOCH + timedelta(days=int(rng.integers(0, 60)))
        bookmarks.extend(
            Bookmark(user=f"s{i:04d}u{j:03d}", url=url, timestamp=start + timedelta(hours=j), tags=tags)
            for j, tags in enumerate(stream)
        )
        truth.append(GroundTruthRecord(
            kind="url_settle", key=url,
            values={
                "settle_index": index,
                "epsilon": SETTLE_EPSILON,
                "window": SETTLE_WINDOW,
                "lead": lead,
                "bookmarks": len(stream),
            },
        ))

    summary = {
        "urls": urls,
        "epsilon": SETTLE_EPSILON,
        "window": SETTLE_WINDOW,
        "tolerances": {"settle_index": 0},
    }
    return bookmarks, truth, summary


def _fit(xs: List[int], ys: List[int]) -> Optional[Dict[str, float]]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 3 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    slope, intercept = np.polyfit(x, y, 1)
    r2 = float(np.corrcoef(x, y)[0, 1] ** 2)
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2}


def _user_bookmarks(
    rng: np.random.Generator,
    user: str,
    age: int,
    active: int,
    count: int,
    vocabulary: List[str],
    late_tag: Optional[str] = None
) -> List[Bookmark]:
    first = PEOPLE_AS_OF - timedelta(days=age)
    later = sorted(int(d) for d in rng.choice(np.arange(1, age + 1), size=active - 1, replace=False)) if active > 1 else []
    if late_tag is not None and later and later[-1] != age:
        later[-1] = age
    days = [first] + [first + timedelta(days=d) for d in later]

    per_day = [1] * active
    for d in rng.integers(0, active, size=count - active):
        per_day[int(d)] += 1

    urls = [f"http://people.example/{user}/{n}" for n in range(count)]
    plain = [tag for tag in vocabulary if tag != late_tag]
    bookmarks = []
    n = 0
    for day, per in zip(days, per_day):
        for k in range(per):
            introduced = late_tag is None or n >= LATE_ADOPTER_FIRST_USE - 1
            pool = vocabulary if introduced else plain
            if n < len(plain):
                primary = plain[n]
            elif late_tag is not None and n == LATE_ADOPTER_FIRST_USE - 1:
                primary = late_tag
            else:
                primary = pool[int(rng.integers(0, len(pool)))]
            tags = [primary]
            if rng.random() < 0.5 and len(pool) > 1:
                secondary = pool[int(rng.integers(0, len(pool)))]
                if secondary != primary:
                    tags.append(secondary)
            timestamp = datetime.combine(day, time(8, 0), tzinfo=timezone.utc) + timedelta(seconds=k)
            bookmarks.append(Bookmark(user=user, url=urls[n], timestamp=timestamp, tags=tuple(tags)))
            n += 1
    return bookmarks


def _people_mix(seed: int, size: Optional[int]) -> Tuple[List[Bookmark], List[GroundTruthRecord], Dict]:
    users = max(size or 24, 10)
    bands = ((5, 29), (30, 500), (501, 900))

    bookmarks: List[Bookmark] = []
    truth: List[GroundTruthRecord] = []
    tuples: List[Dict[str, int]] = []
    for i in range(users):
        rng = make_rng(sub_seed(seed, i))
        user = f"person{i:03d}"
        late = i == users - 1
        if late:
            count = LATE_ADOPTER_BOOKMARKS
            active = int(rng.integers(300, 500))
            age = active - 1 + int(rng.integers(0, 200))
            distinct = int(rng.integers(120, 200))
        else:
            low, high = bands[i % 3]
            count = int(rng.integers(low, high + 1))
            active = int(rng.integers(1, min(count, 400) + 1))
            age = active - 1 + int(rng.integers(0, 600))
            distinct = int(np.clip(round(count ** 0.7 + rng.normal(0.0, 2.0)), 1, count))

        names = [f"{user}-t{j:03d}" for j in range(distinct - 1 if late else distinct)]
        vocabulary = names + [LATE_TAG] if late else names
        user_bookmarks = _user_bookmarks(rng, user, age, active, count, vocabulary, LATE_TAG if late else None)
        bookmarks.extend(user_bookmarks)

        row = {
            "account_age_days": age,
            "active_days": active,
            "bookmark_count": count,
            "distinct_tag_count": distinct,
        }
        tuples.append(row)
        truth.append(GroundTruthRecord(kind="user_activity", key=user, values=row))
        if late:
            truth.append(GroundTruthRecord(
                kind="late_adopter", key=user,
                values={"tag": LATE_TAG, "first_use_index": LATE_ADOPTER_FIRST_USE, "bookmarks": count},
            ))

    def column(name: str, rows: List[Dict[str, int]]) -> List[int]:
        return [row[name] for row in rows]

    light = [row for row in tuples if row["bookmark_count"] < 30]
    heavy = [row for row in tuples if row["bookmark_count"] > 500]
    summary = {
        "users": users,
        "as_of": format_timestamp(max(b.timestamp for b in bookmarks)),
        "regressions": {
            "age_vs_active_days": _fit(column("account_age_days", tuples), column("active_days", tuples)),
            "bookmarks_vs_distinct_tags": _fit(column("bookmark_count", tuples), column("distinct_tag_count", tuples)),
            "light_users_bookmarks_vs_tags": _fit(column("bookmark_count", light), column("distinct_tag_count", light)),
            "heavy_users_bookmarks_vs_tags": _fit(column("bookmark_count", heavy), column("distinct_tag_count", heavy)),
        },
        "tolerances": {"activity_tuples": 0, "regression": REGRESSION_TOLERANCE},
    }
    return bookmarks, truth, summary


def _urn_pure(seed: int, size: Optional[int]) -> Tuple[List[Bookmark], List[GroundTruthRecord], Dict]:
    urls = size or 200
    steps = 8
    config = SimConfig.urn_pure(total_bookmarks=steps, url="http://urn.example/url")
    histories = simulate_url_streams(config, urls, seed)
    exact = exact_fraction_distribution(initial_urn(config.initial_tag_counts), steps, "red")

    truth = [
        GroundTruthRecord(kind="urn_atom", key=str(fraction), values={"probability": float(probability)})
        for fraction, probability in exact.atoms.items()
    ]
    # four binomial standard deviations of the largest atom frequency
    spread = 4.0 * max(float(np.sqrt(float(p) * (1 - float(p)) / urls)) for p in exact.atoms.values())
    summary = {
        "urls": urls,
        "steps": steps,
        "initial_counts": dict(config.initial_tag_counts),
        "color": "red",
        "tolerances": {"atom_frequency": spread},
    }
    return [b for history in histories for b in history.entries], truth, summary


PROFILES: Dict[str, Callable[[int, Optional[int]], Tuple[List[Bookmark], List[GroundTruthRecord], Dict]]] = {
    "popular-mix": _popular_mix,
    "people-mix": _people_mix,
    "urn-pure": _urn_pure,
    "settle-mix": _settle_mix,
}


def generate_fixture(profile: str, seed: int, size: Optional[int] = None) -> Fixture:
    """
    Generate a synthetic bookmark log with its planted facts

    Args:
        profile: popular-mix, people-mix, urn-pure or settle-mix
        seed: Root seed; identical seeds give identical fixtures
        size: URLs (popular-mix, urn-pure, settle-mix) or users (people-mix)

    Returns:
        Fixture with bookmarks in file order and ground-truth records
    """
    if profile not in PROFILES:
        raise ArgumentError(f"unknown fixture profile {profile!r}; choose from {sorted(PROFILES)}")

    bookmarks, truth, summary = PROFILES[profile](seed, size)
    bookmarks.sort(key=lambda bookmark: bookmark.timestamp)
    summary = {"profile": profile, "seed": seed, "bookmarks": len(bookmarks), **summary}
    truth.append(GroundTruthRecord(kind="summary", key=profile, values=summary))

    logger.info(f"Generated fixture {profile} (seed={seed}): {len(bookmarks)} bookmarks")
    return Fixture(profile=profile, seed=seed, bookmarks=tuple(bookmarks), ground_truth=tuple(truth))


def default_truth_path(log_path: Path) -> Path:
    return Path(f"{log_path}.truth.jsonl")


def write_fixture(fixture: Fixture, log_path: Path, truth_path: Optional[Path] = None) -> Path:
    """Write the log and its ground-truth sidecar; returns the sidecar path"""
    log_path = Path(log_path)
    truth_path = Path(truth_path) if truth_path else default_truth_path(log_path)
    save_bookmark_log(log_path, fixture.bookmarks)
    with open(truth_path, "w", encoding="utf-8", newline="\n") as f:
        for record in fixture.ground_truth:
            f.write(json.dumps(record.model_dump(mode="json"), ensure_ascii=False, separators=(",", ":")) + "\n")
    logger.info(f"Wrote {len(fixture.ground_truth)} ground-truth records to {truth_path}")
    return truth_path


def load_ground_truth(path: Path) -> List[GroundTruthRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return [GroundTruthRecord.model_validate_json(line) for line in f if line.strip()]
