#!/usr/bin/env python3
"""
Calibrate Analysis Thresholds Across Seeds
Runs the Monte Carlo seed sweeps directly, without the CLI
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import SimConfig
from collab_tagging_simulator.core.exceptions import TaggingSimulatorError
from collab_tagging_simulator.core.orchestrator import ExperimentOrchestrator

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler()]
)

logger = logging.getLogger(__name__)


def print_banner():
    """Print calibration banner"""
    banner = """
    ╔══════════════════════════════════════════════════════════════╗
    ║         Threshold Calibration - Seed Sweeps                  ║
    ║         Collaborative Tagging Simulator                      ║
    ╚══════════════════════════════════════════════════════════════╝
    """
    print(banner)


def parse_args():
    parser = argparse.ArgumentParser(description="Stabilization and position-rank pass rates across seeds")
    parser.add_argument("--seeds", type=int, default=100, help="Number of seeds to sweep")
    parser.add_argument("--bookmarks", type=int, default=2000, help="Bookmarks per simulated URL")
    parser.add_argument("--max-index", type=int, default=1000, help="Stabilization index considered settled")
    parser.add_argument("--workers", type=int, default=Config.WORKERS)
    parser.add_argument("--output-dir", type=Path, default=Path(Config.RESULTS_DIR))
    return parser.parse_args()


def main():
    """Main calibration function"""
    print_banner()
    args = parse_args()

    try:
        config = SimConfig.from_defaults(total_bookmarks=args.bookmarks)
        orchestrator = ExperimentOrchestrator(workers=args.workers)
        logger.info(f"Sweeping {args.seeds} seeds at {args.bookmarks} bookmarks per URL")

        stabilization = orchestrator.run_stabilization_study(
            config=config, seeds=range(args.seeds), max_index=args.max_index
        )
        positions = orchestrator.run_position_rank_study(config=config, seeds=range(args.seeds))

        settled = [v for v in stabilization.values if v is not None]
        logger.info(f"{'#' * 80}")
        logger.info("Calibration Complete")
        logger.info(f"Settled by bookmark {args.max_index}: {stabilization.pass_rate:.1%}")
        if settled:
            logger.info(f"Latest stabilization index seen: {max(settled):.0f}")
        logger.info(f"Non-decreasing median rank: {positions.pass_rate:.1%}")
        logger.info(f"{'#' * 80}")

        output_dir = Path(args.output_dir) / datetime.now().strftime("%Y%m%d_%H%M%S")
        orchestrator.save_results(output_dir)
        logger.info(f"Results saved to: {output_dir}")
        return 0

    except KeyboardInterrupt:
        logger.warning("Calibration interrupted by user")
        return 1

    except TaggingSimulatorError as e:
        logger.error(f"Calibration failed: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
