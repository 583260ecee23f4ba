"""
Main Entry Point for the Collaborative Tagging Simulator
Simulate tag streams, run urn experiments, analyze bookmark logs
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import colorlog
import pandas as pd
from pydantic import ValidationError

from collab_tagging_simulator.analytics.popularity import daily_activity, peak_bucket_summary
from collab_tagging_simulator.analytics.stabilization import detect_stabilization
from collab_tagging_simulator.analytics.tag_structure import position_rank_analysis, tag_kind_summary
from collab_tagging_simulator.analytics.user_activity import user_activity_stats, user_tag_counts
from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import Dataset, Lexicons, RunConfig, SimConfig, parse_timestamp
from collab_tagging_simulator.core.dataset import build_dataset, proportion_trajectory
from collab_tagging_simulator.core.exceptions import ArgumentError, InsufficientDataError, TaggingSimulatorError
from collab_tagging_simulator.core.orchestrator import ExperimentOrchestrator
from collab_tagging_simulator.ingest.bookmark_log import load_bookmark_log, save_bookmark_log, write_bookmark_log
from collab_tagging_simulator.ingest.fixtures import PROFILES, generate_fixture, write_fixture
from collab_tagging_simulator.ingest.reports import (
    FORMATS, emit, fraction_distribution_frame, growth_chart_frame, limit_law_frame, peak_bucket_frame,
    peak_report_frame, position_rank_frame, proportion_chart_frame, render, stability_frame,
    tag_kind_frame, urn_trajectory_frame, user_activity_frame
)
from collab_tagging_simulator.simulation.tag_stream_generator import TagStreamGenerator
from collab_tagging_simulator.urn.polya_urn import (
    exact_fraction_distribution, initial_urn, simulate_urn
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class SimulatorArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the validation code"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def setup_logging(verbose: bool = False) -> None:
    """Console logs go to stderr; stdout carries data only"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(colorlog.ColoredFormatter("%(log_color)s" + LOG_FORMAT))
    root.addHandler(console)

    if Config.LOG_FILE:
        file_handler = logging.FileHandler(Config.LOG_FILE)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)

    level = logging.DEBUG if verbose else getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO)
    root.setLevel(level)


def _counts(text: str) -> List[int]:
    try:
        counts = [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated counts like 1,1, got {text!r}")
    if not counts or any(count < 1 for count in counts):
        raise argparse.ArgumentTypeError(f"initial counts must all be >= 1, got {text!r}")
    return counts


def _timestamp(text: str) -> datetime:
    # bare dates mean midnight UTC
    if len(text) == 10:
        text = f"{text}T00:00:00Z"
    try:
        return parse_timestamp(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=None, help="Root seed for all randomness")
    parent.add_argument("--config", type=Path, default=None, help="JSON run configuration file")
    parent.add_argument("--output", type=Path, default=None, help="Output file (default: stdout)")
    parent.add_argument("--format", choices=FORMATS, default="csv", help="Report format")
    parent.add_argument("--verbose", action="store_true", help="Enable verbose logging")
    return parent


def _input_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--input", type=Path, required=True, help="Bookmark log to read")
    parent.add_argument("--strict", action="store_true", help="Fail on the first malformed log line")
    parent.add_argument("--normalize-case", action="store_true", help="Lowercase tags while reading")
    return parent


def build_parser() -> SimulatorArgumentParser:
    """Command line interface"""
    common = _common_parent()
    reader = _input_parent()

    parser = SimulatorArgumentParser(
        prog="collab-tagging",
        description="Collaborative tagging dynamics simulator and analytics toolkit"
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=SimulatorArgumentParser)

    simulate = commands.add_parser("simulate", parents=[common], help="Simulate tag streams into a bookmark log")
    simulate.add_argument("--urls", type=int, default=None, help="Independent URL streams")
    simulate.add_argument("--bookmarks", type=int, default=None, help="Bookmarks per URL")
    simulate.set_defaults(handler=cmd_simulate)

    urn = commands.add_parser("urn", help="Polya urn experiments")
    urn_commands = urn.add_subparsers(dest="urn_command", required=True, parser_class=SimulatorArgumentParser)

    urn_simulate = urn_commands.add_parser("simulate", parents=[common], help="One urn trajectory")
    urn_simulate.add_argument("--init", type=_counts, default=[1, 1], help="Initial counts, e.g. 1,1")
    urn_simulate.add_argument("--steps", type=int, default=100)
    urn_simulate.set_defaults(handler=cmd_urn_simulate)

    urn_exact = urn_commands.add_parser("exact", parents=[common], help="Exact terminal fraction law")
    urn_exact.add_argument("--init", type=_counts, default=[1, 1], help="Initial counts, e.g. 1,1")
    urn_exact.add_argument("--steps", type=int, default=8)
    urn_exact.add_argument("--color", default=None, help="Color to report (default: first)")
    urn_exact.set_defaults(handler=cmd_urn_exact)

    limit_test = urn_commands.add_parser("limit-test", parents=[common], help="KS test of limit fractions")
    limit_test.add_argument("--init", type=_counts, default=[1, 1], help="Initial counts, e.g. 1,1")
    limit_test.add_argument("--steps", type=int, default=10_000)
    limit_test.add_argument("--replicates", type=int, default=10_000)
    limit_test.add_argument("--meta-seeds", type=int, default=100, help="Number of independent KS tests")
    limit_test.add_argument("--alpha", type=float, default=None, help="Significance level")
    limit_test.add_argument("--workers", type=int, default=None, help="Worker threads")
    limit_test.set_defaults(handler=cmd_urn_limit_test)

    analyze = commands.add_parser("analyze", help="Analyze a bookmark log")
    analyses = analyze.add_subparsers(dest="analysis", required=True, parser_class=SimulatorArgumentParser)

    stability = analyses.add_parser("stability", parents=[common, reader], help="Stabilization index per URL")
    stability.add_argument("--epsilon", type=float, default=None)
    stability.add_argument("--window", type=int, default=None)
    stability.add_argument("--url", default=None, help="Only this URL")
    stability.set_defaults(handler=cmd_analyze_stability)

    peaks = analyses.add_parser("peaks", parents=[common, reader], help="Peak-day buckets")
    peaks.add_argument("--per-url", action="store_true", help="One row per URL instead of bucket shares")
    peaks.set_defaults(handler=cmd_analyze_peaks)

    positions = analyses.add_parser("positions", parents=[common, reader], help="Median rank by tag position")
    positions.add_argument("--url", default=None, help="Only this URL")
    positions.set_defaults(handler=cmd_analyze_positions)

    users = analyses.add_parser("users", parents=[common, reader], help="Per-user activity and regressions")
    users.add_argument("--as-of", type=_timestamp, default=None, help="Reference date (default: last bookmark)")
    users.set_defaults(handler=cmd_analyze_users)

    growth = analyses.add_parser("growth", parents=[common, reader], help="Tag vocabulary growth")
    growth.add_argument("--user", default=None, help="Cumulative tag curves for this user")
    growth.add_argument("--tag", action="append", default=None, help="Restrict curves to a tag (repeatable)")
    growth.set_defaults(handler=cmd_analyze_growth)

    kinds = analyses.add_parser("kinds", parents=[common, reader], help="Tag-kind token counts")
    kinds.add_argument("--lexicons", type=Path, default=None, help="JSON lexicon file")
    kinds.set_defaults(handler=cmd_analyze_kinds)

    fixture = commands.add_parser("fixture", parents=[common], help="Generate a synthetic fixture")
    fixture.add_argument("--profile", choices=sorted(PROFILES), required=True)
    fixture.add_argument("--size", type=int, default=None, help="Entities to plant (URLs or users)")
    fixture.add_argument("--truth", type=Path, default=None, help="Ground-truth path (default: <output>.truth.jsonl)")
    fixture.set_defaults(handler=cmd_fixture)

    chart = commands.add_parser("export-chart", parents=[common, reader], help="Long-format chart data")
    chart.add_argument("--kind", choices=("proportions", "growth", "arrivals"), default="proportions")
    chart.add_argument("--url", default=None, help="URL for proportions or arrivals")
    chart.add_argument("--user", default=None, help="User for growth")
    chart.set_defaults(handler=cmd_export_chart)

    return parser


# ============================================================================
# Shared helpers
# ============================================================================

def load_run_config(path: Optional[Path]) -> RunConfig:
    if path is None:
        return RunConfig()
    logger.info(f"Loading run configuration from {path}")
    return RunConfig.model_validate_json(Path(path).read_text(encoding="utf-8"))


def _seed(args: argparse.Namespace, run_config: RunConfig) -> int:
    return run_config.seed if args.seed is None else args.seed


def _load_dataset(args: argparse.Namespace, run_config: RunConfig) -> Dataset:
    bookmarks = load_bookmark_log(
        args.input,
        strict=args.strict or run_config.strict,
        normalize_case=args.normalize_case or run_config.normalize_case,
    )
    dataset = build_dataset(bookmarks)
    logger.info(f"Loaded {dataset.size} bookmarks ({len(dataset.by_url)} URLs, {len(dataset.by_user)} users)")
    return dataset


def _url_history(dataset: Dataset, url: Optional[str]):
    if url is None:
        raise ArgumentError("--url is required for this report")
    if url not in dataset.by_url:
        raise ArgumentError(f"URL {url!r} not found in log")
    return dataset.by_url[url]


def _user_history(dataset: Dataset, user: Optional[str]):
    if user is None:
        raise ArgumentError("--user is required for this report")
    if user not in dataset.by_user:
        raise ArgumentError(f"user {user!r} not found in log")
    return dataset.by_user[user]


# ============================================================================
# Commands
# ============================================================================

def cmd_simulate(args: argparse.Namespace, run_config: RunConfig) -> None:
    seed = _seed(args, run_config)
    config = run_config.sim_config(seed)
    if args.bookmarks is not None:
        config = SimConfig.model_validate({**config.model_dump(), "total_bookmarks": args.bookmarks})
    urls = args.urls if args.urls is not None else run_config.simulation.urls
    if urls < 1:
        raise ArgumentError(f"--urls must be >= 1, got {urls}")

    histories = TagStreamGenerator(config).simulate_many(urls, seed)
    dataset = build_dataset(bookmark for history in histories for bookmark in history.entries)

    if args.output is None:
        emit("".join(write_bookmark_log(dataset.bookmarks)))
    else:
        save_bookmark_log(args.output, dataset.bookmarks)


def cmd_urn_simulate(args: argparse.Namespace, run_config: RunConfig) -> None:
    trajectory = simulate_urn(initial_urn(args.init), args.steps, _seed(args, run_config))
    result = trajectory if args.format == "json" else urn_trajectory_frame(trajectory)
    emit(render(result, args.format), args.output)


def cmd_urn_exact(args: argparse.Namespace, run_config: RunConfig) -> None:
    distribution = exact_fraction_distribution(initial_urn(args.init), args.steps, args.color)
    emit(render(fraction_distribution_frame(distribution), args.format), args.output)


def cmd_urn_limit_test(args: argparse.Namespace, run_config: RunConfig) -> None:
    alpha = args.alpha if args.alpha is not None else run_config.analysis.alpha
    orchestrator = ExperimentOrchestrator(workers=args.workers)
    study = orchestrator.run_limit_law_study(
        initial_counts=args.init,
        steps=args.steps,
        replicates=args.replicates,
        meta_seeds=range(args.meta_seeds),
        alpha=alpha,
        root_seed=_seed(args, run_config),
    )
    result = study if args.format == "json" else limit_law_frame(study)
    emit(render(result, args.format), args.output)


def cmd_analyze_stability(args: argparse.Namespace, run_config: RunConfig) -> None:
    dataset = _load_dataset(args, run_config)
    epsilon = args.epsilon if args.epsilon is not None else run_config.analysis.epsilon
    window = args.window if args.window is not None else run_config.analysis.window

    if args.url is not None:
        histories = [_url_history(dataset, args.url)]
    else:
        histories = list(dataset.by_url.values())

    reports = []
    for history in histories:
        if args.url is None and history.length < window:
            logger.debug(f"Skipping {history.key}: {history.length} bookmarks < window {window}")
            continue
        reports.append(detect_stabilization(proportion_trajectory(history), epsilon, window))
    logger.info(f"Stabilization computed for {len(reports)} URLs")
    emit(render(stability_frame(reports), args.format), args.output)


def cmd_analyze_peaks(args: argparse.Namespace, run_config: RunConfig) -> None:
    summary = peak_bucket_summary(_load_dataset(args, run_config))
    frame = peak_report_frame(summary) if args.per_url else peak_bucket_frame(summary)
    emit(render(frame, args.format), args.output)


def cmd_analyze_positions(args: argparse.Namespace, run_config: RunConfig) -> None:
    dataset = _load_dataset(args, run_config)
    if args.url is not None:
        histories = [_url_history(dataset, args.url)]
    else:
        histories = [h for h in dataset.by_url.values() if any(b.tags for b in h.entries)]
    reports = [position_rank_analysis(history) for history in histories]
    emit(render(position_rank_frame(reports), args.format), args.output)


def cmd_analyze_users(args: argparse.Namespace, run_config: RunConfig) -> None:
    dataset = _load_dataset(args, run_config)
    try:
        stats = user_activity_stats(dataset, args.as_of)
    except InsufficientDataError as e:
        logger.warning(f"{e}; reporting per-user rows without regressions")
        stats = e.partial
    result = stats if args.format == "json" else user_activity_frame(stats)
    emit(render(result, args.format), args.output)


def cmd_analyze_growth(args: argparse.Namespace, run_config: RunConfig) -> None:
    dataset = _load_dataset(args, run_config)
    if args.user is not None:
        frame = growth_chart_frame(_user_history(dataset, args.user), args.tag)
    else:
        frame = pd.DataFrame(user_tag_counts(dataset), columns=["user", "distinct_tags"])
    emit(render(frame, args.format), args.output)


def cmd_analyze_kinds(args: argparse.Namespace, run_config: RunConfig) -> None:
    lexicons = None
    if args.lexicons is not None:
        lexicons = Lexicons.model_validate_json(Path(args.lexicons).read_text(encoding="utf-8"))
    summary = tag_kind_summary(_load_dataset(args, run_config), lexicons)
    emit(render(tag_kind_frame(summary), args.format), args.output)


def cmd_fixture(args: argparse.Namespace, run_config: RunConfig) -> None:
    if args.output is None:
        raise ArgumentError("fixture needs --output for the bookmark log")
    fixture = generate_fixture(args.profile, _seed(args, run_config), args.size)
    truth_path = write_fixture(fixture, args.output, args.truth)
    logger.info(f"Fixture {args.profile!r}: {len(fixture.bookmarks)} bookmarks, ground truth at {truth_path}")


def cmd_export_chart(args: argparse.Namespace, run_config: RunConfig) -> None:
    dataset = _load_dataset(args, run_config)
    if args.kind == "proportions":
        frame = proportion_chart_frame(proportion_trajectory(_url_history(dataset, args.url)))
    elif args.kind == "growth":
        frame = growth_chart_frame(_user_history(dataset, args.user))
    else:
        frame = daily_activity(_url_history(dataset, args.url))
    emit(render(frame, args.format), args.output)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:
        # --help exits 0, usage errors exit 1
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_VALIDATION

    setup_logging(args.verbose)
    handler: Callable[[argparse.Namespace, RunConfig], None] = args.handler

    try:
        run_config = load_run_config(args.config)
        handler(args, run_config)
        return EXIT_OK

    except (TaggingSimulatorError, ValidationError, UnicodeError) as e:
        logger.error(f"Invalid input: {e}", exc_info=args.verbose)
        return EXIT_VALIDATION

    except OSError as e:
        logger.error(f"I/O error: {e}", exc_info=args.verbose)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
