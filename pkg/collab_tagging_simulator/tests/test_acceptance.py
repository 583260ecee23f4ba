"""
End-to-end acceptance checks

Long Monte Carlo runs are marked slow; deselect with -m "not slow".
"""

import logging
from fractions import Fraction

import pytest

from collab_tagging_simulator.analytics.popularity import classify_peak_buckets
from collab_tagging_simulator.analytics.statistics import ols_r2
from collab_tagging_simulator.analytics.tag_structure import classify_tag_kind
from collab_tagging_simulator.analytics.user_activity import user_activity_stats
from collab_tagging_simulator.core.data_models import PeakBucket, SimConfig, TagKind
from collab_tagging_simulator.core.dataset import build_dataset
from collab_tagging_simulator.core.orchestrator import ExperimentOrchestrator
from collab_tagging_simulator.core.rng import make_rng
from collab_tagging_simulator.ingest.fixtures import REGRESSION_TOLERANCE, generate_fixture
from collab_tagging_simulator.main_entry import EXIT_OK, main
from collab_tagging_simulator.urn.polya_urn import (
    expected_next_fraction, initial_urn, limit_fraction_samples, simulate_urn
)


@pytest.fixture
def orchestrator():
    return ExperimentOrchestrator(show_progress=False)


class TestUrnLaws:
    """Conservation, limit law and martingale"""

    @pytest.mark.parametrize("steps", [1, 10, 10_000])
    def test_conservation(self, steps):
        trajectory = simulate_urn(initial_urn([1, 1]), steps, seed=steps)
        assert trajectory.final_state().total == steps + 2

    @pytest.mark.slow
    def test_random_limit_is_uniform(self, orchestrator):
        """10^4 replicates x 10^4 steps per meta-seed, KS at alpha=0.01"""
        study = orchestrator.run_limit_law_study(initial_counts=(1, 1), alpha=0.01)
        assert len(study.results) == 100
        assert study.pass_count >= 98

    def test_martingale_at_random_states(self):
        rng = make_rng(20050623)
        for _ in range(1000):
            colors = int(rng.integers(2, 6))
            counts = [int(c) for c in rng.integers(1, 200, size=colors)]
            state = initial_urn(counts)
            color = state.colors[int(rng.integers(0, colors))]
            expected = expected_next_fraction(state, color)
            assert isinstance(expected, Fraction)
            assert expected == state.exact_fraction(color)

    def test_mean_terminal_fraction_from_three_one(self):
        samples = limit_fraction_samples(initial_urn([3, 1]), 1000, 10_000, seed=7)
        assert abs(samples.mean() - 0.75) <= 0.02


class TestTagStreamBehavior:
    """Simulated streams show the qualitative shapes of real tagging"""

    @pytest.mark.slow
    def test_default_streams_stabilize(self, orchestrator):
        config = SimConfig.from_defaults(total_bookmarks=2000)
        study = orchestrator.run_stabilization_study(config, range(100), epsilon=0.05, window=100, max_index=1000)
        assert study.pass_count >= 90

    @pytest.mark.slow
    def test_urn_mode_matches_exact_law(self, orchestrator):
        study = orchestrator.run_urn_reduction_study(steps=8, replicates=100_000, seed=0)
        assert set(study.exact) == {f"{k}/10" for k in range(1, 10)}
        assert study.max_abs_error <= 0.01

    @pytest.mark.slow
    def test_median_rank_rises_with_position(self, orchestrator):
        study = orchestrator.run_position_rank_study(seeds=range(100))
        assert study.pass_count >= 95


class TestFixtureAnalytics:
    """Analytics recover planted facts"""

    def test_popular_mix_bucket_shares(self):
        fixture = generate_fixture("popular-mix", 0, 100)
        buckets = classify_peak_buckets(build_dataset(fixture.bookmarks))
        assert buckets == {
            PeakBucket.FIRST_DAY: (17, 0.17),
            PeakBucket.WITHIN_10_DAYS: (50, 0.50),
            PeakBucket.AFTER_6_MONTHS: (17, 0.17),
            PeakBucket.OTHER: (16, 0.16),
        }

    def test_ols_hand_case(self):
        fit = ols_r2([0, 1, 2], [0, 1, 1])
        assert fit.slope == pytest.approx(0.5, abs=1e-9)
        assert fit.intercept == pytest.approx(1 / 6, abs=1e-9)
        assert fit.r2 == pytest.approx(0.75, abs=1e-9)

    def test_people_mix_regressions(self):
        fixture = generate_fixture("people-mix", 4)
        planted = fixture.ground_truth[-1].values["regressions"]
        stats = user_activity_stats(build_dataset(fixture.bookmarks))
        for name, expected in planted.items():
            fit = getattr(stats, name)
            if expected is None:
                assert fit is None
                continue
            assert fit.slope == pytest.approx(expected["slope"], abs=REGRESSION_TOLERANCE)
            assert fit.intercept == pytest.approx(expected["intercept"], abs=REGRESSION_TOLERANCE)
            assert fit.r2 == pytest.approx(expected["r2"], abs=REGRESSION_TOLERANCE)

    @pytest.mark.parametrize("tag, kind", [
        ("mystuff", TagKind.SELF_REFERENCE),
        ("mycomments", TagKind.SELF_REFERENCE),
        ("toread", TagKind.TASK),
        ("jobsearch", TagKind.TASK),
        ("25", TagKind.REFINEMENT),
        ("100", TagKind.REFINEMENT),
        ("article", TagKind.WHAT_IT_IS),
        ("blog", TagKind.WHAT_IT_IS),
        ("book", TagKind.WHAT_IT_IS),
        ("funny", TagKind.QUALITY),
        ("scary", TagKind.QUALITY),
        ("stupid", TagKind.QUALITY),
        ("inspirational", TagKind.QUALITY),
    ])
    def test_named_tag_kinds(self, tag, kind):
        assert classify_tag_kind(tag) is kind


class TestCliDeterminism:
    """Every subcommand writes identical bytes on a repeat run"""

    @pytest.fixture(autouse=True)
    def restore_root_logger(self):
        root = logging.getLogger()
        handlers, level = list(root.handlers), root.level
        yield
        root.handlers[:] = handlers
        root.setLevel(level)

    @pytest.fixture
    def logs(self, tmp_path):
        paths = {}
        for profile, size in (("popular-mix", 10), ("people-mix", 10)):
            path = tmp_path / f"{profile}.log"
            assert main(["fixture", "--profile", profile, "--seed", "3", "--size", str(size), "--output", str(path)]) == EXIT_OK
            paths[profile] = path
        return paths

    def _twice(self, tmp_path, args):
        outputs = []
        for run in ("first", "second"):
            out = tmp_path / f"{run}.out"
            assert main([*args, "--output", str(out)]) == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        assert outputs[0]

    def test_generators(self, tmp_path):
        self._twice(tmp_path, ["simulate", "--seed", "11", "--urls", "2", "--bookmarks", "50"])
        self._twice(tmp_path, ["fixture", "--profile", "urn-pure", "--seed", "11", "--size", "10"])
        self._twice(tmp_path, ["fixture", "--profile", "settle-mix", "--seed", "11", "--size", "5"])
        self._twice(tmp_path, ["urn", "simulate", "--init", "2,1", "--steps", "50", "--seed", "11"])
        self._twice(tmp_path, ["urn", "exact", "--init", "1,1", "--steps", "6"])
        self._twice(tmp_path, [
            "urn", "limit-test", "--steps", "100", "--replicates", "200", "--meta-seeds", "2",
            "--seed", "11", "--workers", "2",
        ])

    @pytest.mark.parametrize("args", [
        ["analyze", "stability", "--window", "5"],
        ["analyze", "peaks", "--per-url"],
        ["analyze", "positions"],
        ["analyze", "kinds", "--format", "json"],
    ])
    def test_url_analyses(self, tmp_path, logs, args):
        self._twice(tmp_path, [*args, "--input", str(logs["popular-mix"])])

    @pytest.mark.parametrize("args", [
        ["analyze", "users"],
        ["analyze", "growth"],
        ["analyze", "growth", "--user", "person000"],
        ["export-chart", "--kind", "growth", "--user", "person001"],
    ])
    def test_user_analyses(self, tmp_path, logs, args):
        self._twice(tmp_path, [*args, "--input", str(logs["people-mix"])])

    @pytest.mark.parametrize("kind", ["proportions", "arrivals"])
    def test_url_charts(self, tmp_path, logs, kind):
        args = ["export-chart", "--kind", kind, "--url", "http://popular.example/0000"]
        self._twice(tmp_path, [*args, "--input", str(logs["popular-mix"])])
