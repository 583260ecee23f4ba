"""
Basic Usage Examples for the Collaborative Tagging Simulator
Demonstrates how to use the system programmatically
"""

import logging

from collab_tagging_simulator.analytics.popularity import peak_bucket_summary
from collab_tagging_simulator.analytics.stabilization import detect_stabilization
from collab_tagging_simulator.analytics.tag_structure import position_rank_analysis
from collab_tagging_simulator.analytics.user_activity import user_activity_stats
from collab_tagging_simulator.core.data_models import SimConfig
from collab_tagging_simulator.core.dataset import build_dataset, proportion_trajectory
from collab_tagging_simulator.ingest.fixtures import generate_fixture
from collab_tagging_simulator.simulation.tag_stream_generator import TagStreamGenerator
from collab_tagging_simulator.urn.polya_urn import exact_fraction_distribution, initial_urn, simulate_urn

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def example_1_urn():
    """
    Example 1: Polya urn trajectory and its exact terminal law
    """
    print("\n" + "=" * 80)
    print("Example 1: Polya Urn")
    print("=" * 80 + "\n")

    init = initial_urn({"red": 1, "black": 1})
    trajectory = simulate_urn(init, steps=1000, seed=7)
    print(f"Terminal red fraction after 1000 draws: {trajectory.terminal_fraction('red'):.4f}")

    distribution = exact_fraction_distribution(init, steps=2, color="red")
    for fraction, probability in distribution.atoms.items():
        print(f"  P(red fraction = {fraction}) = {probability}")


def example_2_stabilization():
    """
    Example 2: Simulate one URL and find where its tag proportions settle
    """
    print("\n" + "=" * 80)
    print("Example 2: Tag Proportion Stabilization")
    print("=" * 80 + "\n")

    generator = TagStreamGenerator(SimConfig.from_defaults(total_bookmarks=2000))
    history = generator.simulate(seed=42)
    report = detect_stabilization(proportion_trajectory(history))

    print(f"URL: {history.key} ({history.length} bookmarks)")
    print(f"Stabilization index: {report.stabilization_index}")
    top = sorted(report.final_proportions.items(), key=lambda item: -item[1])[:5]
    for tag, proportion in top:
        print(f"  {tag:<16} {proportion:.3f}")

    ranks = position_rank_analysis(history)
    print(f"Median rank by position: {ranks.as_list()}")


def example_3_fixtures():
    """
    Example 3: Analyze synthetic fixtures with known answers
    """
    print("\n" + "=" * 80)
    print("Example 3: Fixture Analysis")
    print("=" * 80 + "\n")

    popular = build_dataset(generate_fixture("popular-mix", seed=1).bookmarks)
    summary = peak_bucket_summary(popular)
    for bucket, share in summary.buckets.items():
        print(f"  {bucket.value:<24} {share.count:>4} ({share.fraction:.0%})")

    people = build_dataset(generate_fixture("people-mix", seed=1).bookmarks)
    stats = user_activity_stats(people)
    regression = stats.bookmarks_vs_distinct_tags
    if regression is not None:
        print(f"\nBookmarks vs distinct tags: slope={regression.slope:.3f} R^2={regression.r2:.3f}")


def main():
    """Run all examples"""
    print("\n" + "=" * 80)
    print("Collaborative Tagging Simulator - Usage Examples")
    print("=" * 80)

    example_1_urn()
    example_2_stabilization()
    example_3_fixtures()

    print("\n" + "=" * 80)
    print("All examples completed")
    print("=" * 80 + "\n")


if __name__ == "__main__":
    main()
