"""
Tests for the tag stream generator
"""

import logging
from collections import Counter
from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collab_tagging_simulator.analytics.popularity import detect_peak
from collab_tagging_simulator.core.data_models import (
    ArrivalSchedule, Bookmark, PeakBucket, SimConfig, TagCountState, UrlHistory
)
from collab_tagging_simulator.core.dataset import proportion_trajectory
from collab_tagging_simulator.core.exceptions import ArgumentError, ConfigurationError
from collab_tagging_simulator.core.rng import make_rng
from collab_tagging_simulator.simulation.tag_stream_generator import (
    TagStreamGenerator, arrival_times, select_tags, simulate_url_stream, simulate_url_streams
)
from collab_tagging_simulator.tests.conftest import ScriptedRng


def _config(**overrides) -> SimConfig:
    values = dict(
        imitation_prob=0.5,
        top_k=5,
        shared_vocab={"x": 1.0},
        tags_per_bookmark={1: 1.0},
        total_bookmarks=10,
        arrival=ArrivalSchedule.constant(10.0),
    )
    values.update(overrides)
    return SimConfig(**values)


class TestSelectTags:
    """Test per-bookmark tag choice"""

    def test_pure_imitation(self):
        """p=1 on a non-empty state always copies a displayed tag"""
        config = _config(imitation_prob=1.0)
        state = TagCountState.from_counts({"a": 1})
        rng = make_rng(0)
        assert all(select_tags(state, config, rng) == ["a"] for _ in range(50))

    def test_pure_background(self):
        config = _config(imitation_prob=0.0)
        state = TagCountState.from_counts({"a": 9})
        rng = make_rng(0)
        assert all(select_tags(state, config, rng) == ["x"] for _ in range(50))

    def test_scripted_background_then_imitation(self):
        """Draw order: slot count, then innovate/imitate/pick per slot"""
        config = _config(shared_vocab={"c": 1.0}, tags_per_bookmark={2: 1.0}, top_k=2)
        state = TagCountState.from_counts({"a": 3, "b": 1})
        rng = ScriptedRng([
            0.0,             # slot count
            0.9, 0.9, 0.0,   # slot 1: background -> c
            0.9, 0.1, 0.0,   # slot 2: imitation -> a
        ])
        assert select_tags(state, config, rng) == ["a", "c"]
        assert rng.calls == 7

    def test_empty_state_falls_back_to_vocabulary(self):
        config = _config(imitation_prob=1.0)
        assert select_tags(TagCountState(), config, make_rng(1)) == ["x"]

    def test_innovation_mints_fresh_tags(self):
        config = _config(innovation_prob=1.0, tags_per_bookmark={2: 1.0}, shared_vocab={"g0": 1.0})
        state = TagCountState.from_counts({"g1": 1})
        tags = select_tags(state, config, make_rng(0))
        assert tags == ["g2", "g3"]
        assert state.minted == 4

    def test_redraw_limit_drops_slot(self, caplog):
        """A one-word vocabulary cannot fill two slots"""
        config = _config(imitation_prob=0.0, tags_per_bookmark={2: 1.0}, redraw_limit=3)
        with caplog.at_level(logging.DEBUG):
            assert select_tags(TagCountState(), config, make_rng(0)) == ["x"]
        assert "Dropped slot 2" in caplog.text

    def test_zero_tags(self):
        config = _config(tags_per_bookmark={0: 1.0})
        assert select_tags(TagCountState(), config, make_rng(0)) == []

    def test_ordered_by_current_count(self):
        config = _config(imitation_prob=0.0, shared_vocab={"p": 0.5, "q": 0.5}, tags_per_bookmark={2: 1.0})
        state = TagCountState.from_counts({"q": 4, "p": 1})
        for seed in range(10):
            assert select_tags(state, config, make_rng(seed)) == ["q", "p"]


class TestArrivalTimes:
    """Test inhomogeneous Poisson arrivals"""

    def test_zero_count(self, constant_schedule):
        assert arrival_times(constant_schedule, 0, make_rng(0)) == []

    def test_negative_count(self, constant_schedule):
        with pytest.raises(ArgumentError):
            arrival_times(constant_schedule, -1, make_rng(0))

    def test_first_arrival_at_start(self, constant_schedule):
        start = datetime(2006, 3, 1, tzinfo=timezone.utc)
        times = arrival_times(constant_schedule, 5, make_rng(0), start)
        assert times[0] == start
        assert times == sorted(times)
        assert all(t.microsecond == 0 for t in times)

    def test_all_zero_rates(self):
        schedule = ArrivalSchedule(segments=[(10, 0.0)])
        with pytest.raises(ConfigurationError):
            arrival_times(schedule, 3, make_rng(0))

    def test_schedule_running_dry(self):
        """A zero tail rate cannot supply arrivals past the schedule end"""
        schedule = ArrivalSchedule(segments=[(1, 1.0), (1, 0.0)])
        with pytest.raises(ConfigurationError):
            arrival_times(schedule, 1000, make_rng(0))

    def test_constant_rate_span(self, constant_schedule):
        """1000 arrivals at 10/day span about 100 days"""
        within = 0
        for seed in range(100):
            times = arrival_times(constant_schedule, 1000, make_rng(seed))
            span = (times[-1] - times[0]).total_seconds() / 86_400
            within += abs(span - 100) <= 10
        assert within >= 98

    def test_burst_sets_peak_day(self):
        """A 20x burst at day 200 dominates a 0.2/day background"""
        schedule = ArrivalSchedule(segments=[(365, 0.2)], burst=(200, 20.0, 5))
        hits = 0
        for seed in range(100):
            times = arrival_times(schedule, 80, make_rng(seed))
            history = UrlHistory(
                key="http://burst",
                entries=tuple(Bookmark(user=f"u{i}", url="http://burst", timestamp=t) for i, t in enumerate(times)),
            )
            report = detect_peak(history)
            hits += 200 <= report.peak_day <= 205
        assert hits >= 95
        assert PeakBucket.for_day(200) is PeakBucket.AFTER_6_MONTHS


class TestSimulateUrlStream:
    """Test whole-history simulation"""

    def test_single_bookmark_uses_vocabulary(self):
        config = _config(total_bookmarks=1, imitation_prob=1.0)
        history = simulate_url_stream(config)
        assert history.length == 1
        assert history.entries[0].tags == ("x",)

    def test_deterministic(self, sim_config):
        first = simulate_url_stream(sim_config, 12)
        second = simulate_url_stream(sim_config, 12)
        assert first == second

    def test_seed_changes_stream(self, sim_config):
        assert simulate_url_stream(sim_config, 1) != simulate_url_stream(sim_config, 2)

    def test_users_and_url(self, sim_config):
        history = simulate_url_stream(sim_config, user_offset=100)
        assert history.entries[0].user == "u101"
        assert {b.url for b in history.entries} == {sim_config.url}

    def test_many_streams(self, sim_config):
        histories = simulate_url_streams(sim_config, 3, seed=5)
        assert [h.key for h in histories] == [f"{sim_config.url}/{i}" for i in range(3)]
        users = [b.user for h in histories for b in h.entries]
        assert len(users) == len(set(users))

    def test_many_streams_need_one_url(self, sim_config):
        with pytest.raises(ArgumentError):
            simulate_url_streams(sim_config, 0)

    def test_generator_wraps_functions(self, sim_config):
        generator = TagStreamGenerator(sim_config)
        assert generator.simulate(4) == simulate_url_stream(sim_config, 4)
        assert len(generator.simulate_many(2, seed=4)) == 2

    def test_urn_reduction_fractions(self):
        fractions = TagStreamGenerator.urn_reduction_fractions(8, 50, seed=0)
        assert fractions.shape == (50,)
        red_counts = np.rint(fractions * 10)
        assert set(red_counts) <= set(range(1, 10))


class TestStreamInvariants:
    """Properties that hold for every seed and mixing weight"""

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32),
        imitation_prob=st.floats(min_value=0.0, max_value=1.0),
        innovation_prob=st.sampled_from([0.0, 0.05, 0.3]),
    )
    def test_tokens_conserved_and_tags_ordered(self, seed, imitation_prob, innovation_prob):
        """Every emitted tag is counted once; tags leave select_tags by non-increasing count"""
        config = SimConfig.from_defaults(imitation_prob=imitation_prob, innovation_prob=innovation_prob)
        rng = make_rng(seed)
        state = TagCountState.from_counts(config.initial_tag_counts)
        emitted = state.total
        for _ in range(150):
            tags = select_tags(state, config, rng)
            counts = [state.count(tag) for tag in tags]
            assert counts == sorted(counts, reverse=True)
            state.record(tuple(tags))
            emitted += len(tags)
            assert state.total == emitted == sum(state.counts.values())

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32), imitation_prob=st.floats(min_value=0.0, max_value=1.0))
    def test_simulated_history_order_by_prior_count(self, seed, imitation_prob):
        """Recounting the history reproduces the position order of every bookmark"""
        config = SimConfig.from_defaults(imitation_prob=imitation_prob, total_bookmarks=120, seed=seed)
        history = simulate_url_stream(config)
        counts = Counter(config.initial_tag_counts)
        for entry in history.entries:
            prior = [counts[tag] for tag in entry.tags]
            assert prior == sorted(prior, reverse=True)
            counts.update(entry.tags)
        assert sum(counts.values()) == sum(config.initial_tag_counts.values()) + sum(
            len(b.tags) for b in history.entries
        )

    @pytest.mark.slow
    def test_proportion_band_narrows(self):
        """The spread of each tag's share over [T/2, T] shrinks from T=200 to T=2000"""
        narrowed = 0
        for seed in range(10):
            history = simulate_url_stream(SimConfig.from_defaults(total_bookmarks=2000, seed=seed))
            matrix = proportion_trajectory(history).as_matrix()

            def spread(t: int) -> float:
                window = matrix[t // 2 - 1:t]
                return float((window.max(axis=0) - window.min(axis=0)).max())

            narrowed += spread(2000) < spread(200)
        assert narrowed >= 8
