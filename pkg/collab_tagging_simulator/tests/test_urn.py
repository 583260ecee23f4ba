"""
Tests for the Polya urn kernel
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.exceptions import ArgumentError, ResourceLimitError
from collab_tagging_simulator.core.rng import make_rng, sub_seed
from collab_tagging_simulator.tests.conftest import ScriptedRng
from collab_tagging_simulator.urn.polya_urn import (
    exact_fraction_distribution, expected_next_fraction, initial_urn, limit_fraction_samples,
    simulate_urn, urn_draw, urn_step
)

urn_counts = st.lists(st.integers(min_value=1, max_value=50), min_size=2, max_size=5)


class TestUrnStep:
    """Test single reinforcement steps"""

    def test_red_draw(self):
        """Drawing red adds one red ball"""
        state = urn_step(initial_urn({"red": 1, "black": 1}), "red")
        assert state.counts == {"red": 2, "black": 1}
        assert state.total == 3
        assert state.step == 1

    def test_three_colors(self):
        state = urn_step(initial_urn([1, 1, 1]), "c1")
        assert [state.counts[c] for c in ("c0", "c1", "c2")] == [1, 2, 1]

    def test_unknown_color(self):
        with pytest.raises(ArgumentError):
            urn_step(initial_urn({"red": 1}), "blue")

    def test_repeated_draws_conserve_balls(self):
        state = initial_urn({"red": 1, "black": 1})
        for _ in range(25):
            state = urn_step(state, "red")
        assert state.total == 27
        assert state.initial_total == 2


class TestUrnDraw:
    """Test proportional draws"""

    def test_draw_boundaries(self):
        """u * total is compared against cumulative counts"""
        state = initial_urn({"a": 2, "b": 1})
        assert urn_draw(state, ScriptedRng([0.0])) == "a"
        assert urn_draw(state, ScriptedRng([0.66])) == "a"
        assert urn_draw(state, ScriptedRng([2 / 3])) == "b"
        assert urn_draw(state, ScriptedRng([0.99])) == "b"

    def test_consumes_one_uniform(self):
        rng = ScriptedRng([0.1, 0.9])
        urn_draw(initial_urn([1, 1]), rng)
        assert rng.calls == 1

    def test_even_urn_frequency(self):
        """Frequency of color 0 over 10^5 draws stays within 4 sigma of 1/2"""
        state = initial_urn([1, 1])
        rng = make_rng(2024)
        hits = sum(urn_draw(state, rng) == "c0" for _ in range(100_000))
        assert abs(hits / 100_000 - 0.5) < 0.006


class TestSimulateUrn:
    """Test urn trajectories"""

    def test_zero_steps(self):
        trajectory = simulate_urn(initial_urn({"red": 1, "black": 3}), 0, seed=1)
        assert trajectory.steps == 0
        assert trajectory.fraction_vectors() == [{"red": 0.25, "black": 0.75}]

    def test_same_seed_same_trajectory(self):
        init = initial_urn([1, 1])
        first = simulate_urn(init, 500, seed=(3, 1))
        second = simulate_urn(init, 500, seed=(3, 1))
        assert first.model_dump_json() == second.model_dump_json()
        assert first.seed == "3/1"

    @pytest.mark.parametrize("steps", [1, 10, 10_000])
    def test_conservation(self, steps):
        """(1,1) holds N+2 balls after N draws"""
        trajectory = simulate_urn(initial_urn({"red": 1, "black": 1}), steps, seed=0)
        assert trajectory.final_state().total == steps + 2
        assert all(sum(row) == 2 + t for t, row in enumerate(trajectory.counts))

    def test_negative_steps(self):
        with pytest.raises(ArgumentError):
            simulate_urn(initial_urn([1, 1]), -1, seed=0)


class TestExactDistribution:
    """Test exact terminal-fraction laws"""

    def test_two_steps(self):
        distribution = exact_fraction_distribution(initial_urn({"red": 1, "black": 1}), 2, "red")
        assert distribution.atoms == {
            Fraction(1, 4): Fraction(1, 3),
            Fraction(1, 2): Fraction(1, 3),
            Fraction(3, 4): Fraction(1, 3),
        }

    def test_one_step(self):
        distribution = exact_fraction_distribution(initial_urn([1, 1]), 1)
        assert distribution.atoms == {Fraction(1, 3): Fraction(1, 2), Fraction(2, 3): Fraction(1, 2)}

    def test_zero_steps(self):
        distribution = exact_fraction_distribution(initial_urn({"red": 2, "black": 3}), 0, "red")
        assert distribution.atoms == {Fraction(2, 5): Fraction(1)}

    @pytest.mark.parametrize("steps", range(1, 13))
    def test_uniform_law_from_even_start(self, steps):
        """From (1,1) every count 1..N+1 of red is equally likely"""
        distribution = exact_fraction_distribution(initial_urn([1, 1]), steps)
        expected = {Fraction(k, steps + 2): Fraction(1, steps + 1) for k in range(1, steps + 2)}
        assert distribution.atoms == expected

    def test_three_colors_mass(self):
        distribution = exact_fraction_distribution(initial_urn([1, 2, 1]), 6, "c1")
        assert sum(distribution.atoms.values()) == 1
        mean = sum(f * p for f, p in distribution.atoms.items())
        assert mean == Fraction(1, 2)

    def test_step_guard(self):
        with pytest.raises(ResourceLimitError):
            exact_fraction_distribution(initial_urn([1, 1]), Config.MAX_EXACT_STEPS + 1)

    def test_unknown_color(self):
        with pytest.raises(ArgumentError):
            exact_fraction_distribution(initial_urn([1, 1]), 2, "red")


class TestMartingale:
    """Test the one-step expectation identity"""

    @settings(max_examples=200, deadline=None)
    @given(counts=urn_counts, data=st.data())
    def test_expected_next_fraction_is_current(self, counts, data):
        """E[fraction after one draw] equals the current fraction, exactly"""
        state = initial_urn(counts)
        color = data.draw(st.sampled_from(state.colors))
        assert expected_next_fraction(state, color) == state.exact_fraction(color)

    @settings(max_examples=50, deadline=None)
    @given(counts=urn_counts, steps=st.integers(min_value=0, max_value=6))
    def test_exact_law_mean_is_initial_fraction(self, counts, steps):
        """Martingale over several steps: the exact law's mean never moves"""
        state = initial_urn(counts)
        distribution = exact_fraction_distribution(state, steps)
        mean = sum((f * p for f, p in distribution.atoms.items()), Fraction(0))
        assert mean == state.exact_fraction("c0")


class TestLimitFractionSamples:
    """Test vectorized replicate sampling"""

    def test_single_replicate_matches_scalar_path(self):
        init = initial_urn([1, 1])
        samples = limit_fraction_samples(init, 300, 1, seed=9)
        assert samples[0] == simulate_urn(init, 300, sub_seed(9, 0)).terminal_fraction()

    @pytest.mark.parametrize("counts", [[1, 1], [3, 1], [1, 2, 3]])
    def test_each_replicate_matches_scalar_path(self, counts):
        """Replicate r is simulate_urn under sub_seed(seed, r)"""
        init = initial_urn(counts)
        samples = limit_fraction_samples(init, 120, 6, seed=(4, 2))
        expected = [simulate_urn(init, 120, sub_seed((4, 2), r)).terminal_fraction() for r in range(6)]
        np.testing.assert_array_equal(samples, expected)

    def test_zero_steps(self):
        samples = limit_fraction_samples(initial_urn({"red": 3, "black": 1}), 0, 4, seed=0)
        np.testing.assert_array_equal(samples, [0.75] * 4)

    def test_replicates_required(self):
        with pytest.raises(ArgumentError):
            limit_fraction_samples(initial_urn([1, 1]), 10, 0, seed=0)

    @pytest.mark.slow
    @pytest.mark.parametrize("counts, steps", [([1, 1], 10), ([2, 1], 8), ([1, 1, 1], 6)])
    def test_empirical_law_matches_exact(self, counts, steps):
        """Replicate frequencies land within 0.01 of every exact atom"""
        init = initial_urn(counts)
        total = init.total + steps
        samples = limit_fraction_samples(init, steps, 100_000, seed=(23, steps))
        numerators = np.rint(samples * total).astype(np.int64)
        np.testing.assert_allclose(numerators / total, samples, atol=1e-12)
        frequencies = np.bincount(numerators, minlength=total + 1) / len(samples)

        exact = exact_fraction_distribution(init, steps)
        for k in range(total + 1):
            assert abs(frequencies[k] - float(exact.probability(Fraction(k, total)))) <= 0.01

    def test_reported_color(self):
        init = initial_urn({"red": 1, "black": 1})
        red = limit_fraction_samples(init, 50, 10, seed=1, color="red")
        black = limit_fraction_samples(init, 50, 10, seed=1, color="black")
        np.testing.assert_allclose(red + black, 1.0)
