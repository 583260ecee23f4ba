"""Collaborative Tagging Simulator - Polya urn"""

from collab_tagging_simulator.urn.polya_urn import (
    exact_fraction_distribution,
    expected_next_fraction,
    initial_urn,
    limit_fraction_samples,
    simulate_urn,
    urn_draw,
    urn_step,
)

__all__ = [
    "exact_fraction_distribution",
    "expected_next_fraction",
    "initial_urn",
    "limit_fraction_samples",
    "simulate_urn",
    "urn_draw",
    "urn_step",
]
