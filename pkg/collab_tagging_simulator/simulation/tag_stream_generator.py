"""
Tag Stream Generator - Synthetic Bookmark Streams
Generates one URL's bookmarks: arrivals from a rate schedule, tags from a mix of
imitating displayed popular tags and sampling a shared vocabulary
"""

import bisect
import logging
import math
from datetime import datetime, timedelta
from itertools import accumulate
from typing import List, Optional, Sequence, Tuple

import numpy as np

from collab_tagging_simulator.core.data_models import (
    ArrivalSchedule, Bookmark, SimConfig, TagCountState, UrlHistory, to_utc_seconds
)
from collab_tagging_simulator.core.exceptions import ArgumentError, ConfigurationError
from collab_tagging_simulator.core.rng import SeedLike, make_rng, sub_seed

logger = logging.getLogger(__name__)


def _categorical(weights: Sequence[float], u: float) -> int:
    cumulative = list(accumulate(weights))
    return min(bisect.bisect_right(cumulative, u * cumulative[-1]), len(cumulative) - 1)


def _mint(state: TagCountState, config: SimConfig, taken: Sequence[str]) -> str:
    """Next unused g<counter> name"""
    while True:
        name = f"g{state.minted}"
        state.minted += 1
        if name not in state.counts and name not in config.shared_vocab and name not in taken:
            return name


def select_tags(state: TagCountState, config: SimConfig, rng: np.random.Generator) -> List[str]:
    """
    Choose the tags of one new bookmark

    One uniform picks the slot count m. Each slot attempt then consumes three
    uniforms (innovation, imitation, pick) whichever branch is taken. A tag
    already in the bookmark voids the attempt; after ``redraw_limit`` void
    attempts the slot is dropped.

    Args:
        state: Current counts of the URL (``minted`` advances on innovation)
        config: Simulation parameters
        rng: Random source; only ``rng.random()`` is used

    Returns:
        Tags ordered by descending current count, draw order breaking ties
    """
    sizes = list(config.tags_per_bookmark)
    slots = sizes[_categorical(list(config.tags_per_bookmark.values()), float(rng.random()))]
    vocab = list(config.shared_vocab)
    vocab_weights = list(config.shared_vocab.values())

    chosen: List[str] = []
    for slot in range(slots):
        for _ in range(config.redraw_limit):
            u_innovate, u_imitate, u_pick = float(rng.random()), float(rng.random()), float(rng.random())
            if u_innovate < config.innovation_prob:
                tag = _mint(state, config, chosen)
            elif u_imitate < config.imitation_prob and not state.is_empty:
                displayed = state.top(config.top_k)
                tag = displayed[_categorical([count for _, count in displayed], u_pick)][0]
            else:
                tag = vocab[_categorical(vocab_weights, u_pick)]
            if tag not in chosen:
                chosen.append(tag)
                break
        else:
            logger.debug(f"Dropped slot {slot + 1} of {slots} after {config.redraw_limit} duplicate draws")

    # sorted() is stable, so equal counts keep draw order
    return sorted(chosen, key=lambda tag: -state.count(tag))


def arrival_times(
    schedule: ArrivalSchedule,
    count: int,
    rng: np.random.Generator,
    start: Optional[datetime] = None
) -> List[datetime]:
    """
    Bookmark instants from an inhomogeneous Poisson process

    The first bookmark marks the URL entering the system at schedule day 0; the
    other ``count - 1`` come from thinning against the schedule's peak rate.
    Past the last segment its rate continues.

    Args:
        schedule: Piecewise-constant rate with optional burst
        count: Number of arrivals
        rng: Random source
        start: Instant of schedule day 0

    Returns:
        Non-decreasing UTC timestamps at second resolution
    """
    if count < 0:
        raise ArgumentError(f"count must be >= 0, got {count}")
    if count == 0:
        return []

    peak = schedule.max_rate()
    if peak <= 0:
        raise ConfigurationError("arrival schedule has no positive rate")

    origin = to_utc_seconds(start or datetime(2005, 1, 1))
    tail_rate = schedule.segments[-1].rate_per_day
    days = [0.0]
    t = 0.0
    while len(days) < count:
        t += -math.log1p(-float(rng.random())) / peak
        if t >= schedule.schedule_end and tail_rate == 0:
            raise ConfigurationError(
                f"schedule stops producing bookmarks after {len(days)} of {count} arrivals"
            )
        if float(rng.random()) * peak < schedule.rate_at(t):
            days.append(t)

    return [to_utc_seconds(origin + timedelta(days=day)) for day in days]


def simulate_url_stream(config: SimConfig, rng_seed: Optional[SeedLike] = None, user_offset: int = 0) -> UrlHistory:
    """
    Simulate the full bookmark history of one URL

    Arrivals are drawn first, then tags bookmark by bookmark. Bookmark i is made
    by synthetic user ``u<user_offset + i>``.
    """
    rng = make_rng(config.seed if rng_seed is None else rng_seed)
    timestamps = arrival_times(config.arrival, config.total_bookmarks, rng, config.start_time)
    state = TagCountState.from_counts(config.initial_tag_counts)

    entries = []
    for i, timestamp in enumerate(timestamps, start=1):
        tags = select_tags(state, config, rng)
        state.record(tuple(tags))
        entries.append(Bookmark(user=f"u{user_offset + i}", url=config.url, timestamp=timestamp, tags=tuple(tags)))

    logger.debug(
        f"Simulated {len(entries)} bookmarks for {config.url}: "
        f"{len(state.counts)} distinct tags, {state.total} tokens"
    )
    return UrlHistory(key=config.url, entries=tuple(entries))


def simulate_url_streams(config: SimConfig, urls: int, seed: Optional[SeedLike] = None) -> List[UrlHistory]:
    """Independent URL streams; stream i uses sub_seed(seed, i) and URL ``<url>/<i>``"""
    if urls < 1:
        raise ArgumentError(f"urls must be >= 1, got {urls}")
    root = config.seed if seed is None else seed
    histories = []
    for i in range(urls):
        stream_config = config.model_copy(update={"url": f"{config.url}/{i}"})
        histories.append(
            simulate_url_stream(stream_config, sub_seed(root, i), user_offset=i * config.total_bookmarks)
        )
    return histories


def urn_reduction_fractions(
    steps: int,
    replicates: int,
    seed: SeedLike,
    colors: Tuple[str, str] = ("red", "black")
) -> np.ndarray:
    """
    Terminal fraction of the first color when tagging runs as a pure urn

    Runs ``select_tags`` directly on a count state seeded with one of each
    color; no timestamps or bookmarks are built.
    """
    config = SimConfig.urn_pure(colors=colors, total_bookmarks=max(steps, 1))
    fractions = np.empty(replicates, dtype=np.float64)
    for r in range(replicates):
        rng = make_rng(sub_seed(seed, r))
        state = TagCountState.from_counts(config.initial_tag_counts)
        for _ in range(steps):
            state.record(tuple(select_tags(state, config, rng)))
        fractions[r] = state.count(colors[0]) / state.total
    return fractions


class TagStreamGenerator:
    """Generates bookmark streams for one simulation configuration"""

    def __init__(self, config: Optional[SimConfig] = None):
        """
        Initialize tag stream generator

        Args:
            config: Simulation parameters (Config defaults when omitted)
        """
        self.config = config or SimConfig.from_defaults()
        logger.info(
            f"Initialized TagStreamGenerator (p={self.config.imitation_prob}, "
            f"top_k={self.config.top_k}, nu={self.config.innovation_prob})"
        )

    def select_tags(self, state: TagCountState, rng: np.random.Generator) -> List[str]:
        return select_tags(state, self.config, rng)

    def arrival_times(self, count: int, rng: np.random.Generator) -> List[datetime]:
        return arrival_times(self.config.arrival, count, rng, self.config.start_time)

    def simulate(self, seed: Optional[SeedLike] = None) -> UrlHistory:
        return simulate_url_stream(self.config, seed)

    def simulate_many(self, urls: int, seed: Optional[SeedLike] = None) -> List[UrlHistory]:
        histories = simulate_url_streams(self.config, urls, seed)
        logger.info(f"Generated {sum(h.length for h in histories)} bookmarks over {urls} URLs")
        return histories

    @staticmethod
    def urn_reduction_fractions(steps: int, replicates: int, seed: SeedLike) -> np.ndarray:
        return urn_reduction_fractions(steps, replicates, seed)
