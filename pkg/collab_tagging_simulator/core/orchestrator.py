"""
Experiment Orchestrator
Runs Monte Carlo studies over seeds and replicates and collects their results
"""

import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

from pydantic import BaseModel
from tqdm import tqdm

from collab_tagging_simulator.analytics.stabilization import detect_stabilization
from collab_tagging_simulator.analytics.statistics import ks_statistic
from collab_tagging_simulator.analytics.tag_structure import position_rank_analysis
from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import (
    LimitLawStudy, SeedSweepStudy, SimConfig, UrnReductionStudy
)
from collab_tagging_simulator.core.dataset import proportion_trajectory
from collab_tagging_simulator.core.rng import sub_seed
from collab_tagging_simulator.simulation.tag_stream_generator import simulate_url_stream, urn_reduction_fractions
from collab_tagging_simulator.urn.polya_urn import exact_fraction_distribution, initial_urn, limit_fraction_samples

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ExperimentOrchestrator:
    """
    Orchestrates seed sweeps and replicate batches

    Work items are fanned out with ThreadPoolExecutor.map, which yields results
    in submission order, so every study is merged by index whatever the
    scheduling.
    """

    def __init__(self, workers: Optional[int] = None, show_progress: Optional[bool] = None):
        """
        Initialize orchestrator

        Args:
            workers: Worker threads (1 runs inline)
            show_progress: Show tqdm progress bars
        """
        self.workers = max(1, workers if workers is not None else Config.WORKERS)
        self.show_progress = Config.SHOW_PROGRESS if show_progress is None else show_progress
        self.studies: Dict[str, BaseModel] = {}
        logger.info(f"Initialized ExperimentOrchestrator (workers={self.workers})")

    def _map(self, fn: Callable[[T], R], items: Sequence[T], label: str) -> List[R]:
        progress = tqdm(total=len(items), desc=label, disable=not self.show_progress)
        try:
            if self.workers == 1:
                results = []
                for item in items:
                    results.append(fn(item))
                    progress.update(1)
                return results
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = []
                for result in pool.map(fn, items):
                    results.append(result)
                    progress.update(1)
                return results
        finally:
            progress.close()

    def run_limit_law_study(
        self,
        initial_counts: Sequence[int] = (1, 1),
        steps: int = 10_000,
        replicates: int = 10_000,
        meta_seeds: Iterable[int] = range(100),
        alpha: Optional[float] = None,
        root_seed: Optional[int] = None
    ) -> LimitLawStudy:
        """
        Test terminal urn fractions against Uniform(0, 1), once per meta-seed

        Args:
            initial_counts: Starting balls per color
            steps: Draws per replicate
            replicates: Replicates per meta-seed
            meta_seeds: Root seeds, one KS test each
            alpha: Significance level
            root_seed: When set, meta-seed m draws from sub_seed(root_seed, m)

        Returns:
            LimitLawStudy with one KSResult per meta-seed
        """
        alpha = Config.KS_ALPHA if alpha is None else alpha
        init = initial_urn(initial_counts)
        seeds = list(meta_seeds)
        color = init.colors[0]
        logger.info(f"Limit-law study: {len(seeds)} meta-seeds x {replicates} replicates x {steps} steps")

        def one(meta_seed: int):
            seed = meta_seed if root_seed is None else sub_seed(root_seed, meta_seed)
            samples = limit_fraction_samples(init, steps, replicates, seed, color)
            return ks_statistic(samples, alpha), float(samples.mean())

        outcomes = self._map(one, seeds, "limit-law")
        study = LimitLawStudy(
            initial_counts=dict(init.counts),
            color=color,
            steps=steps,
            replicates=replicates,
            alpha=alpha,
            meta_seeds=seeds,
            results=[result for result, _ in outcomes],
            sample_means=[mean for _, mean in outcomes],
        )
        logger.info(f"Limit-law study: {study.pass_count}/{len(seeds)} meta-seeds pass at alpha={alpha}")
        self.studies["limit_law"] = study
        return study

    def run_stabilization_study(
        self,
        config: Optional[SimConfig] = None,
        seeds: Iterable[int] = range(100),
        epsilon: Optional[float] = None,
        window: Optional[int] = None,
        max_index: int = 1000
    ) -> SeedSweepStudy:
        """Stabilization index of one simulated URL per seed; passes when <= max_index"""
        config = config or SimConfig.from_defaults()
        seeds = list(seeds)

        def one(seed: int) -> Optional[int]:
            history = simulate_url_stream(config, seed)
            return detect_stabilization(proportion_trajectory(history), epsilon, window).stabilization_index

        indices = self._map(one, seeds, "stabilization")
        study = SeedSweepStudy(
            name="stabilization",
            seeds=seeds,
            values=[float(i) if i is not None else None for i in indices],
            passed=[i is not None and i <= max_index for i in indices],
            threshold=float(max_index),
        )
        logger.info(f"Stabilization study: {study.pass_count}/{len(seeds)} seeds settle by bookmark {max_index}")
        self.studies["stabilization"] = study
        return study

    def run_position_rank_study(
        self,
        config: Optional[SimConfig] = None,
        seeds: Iterable[int] = range(100)
    ) -> SeedSweepStudy:
        """Whether median rank is non-decreasing in position, per seed"""
        config = config or SimConfig.from_defaults()
        seeds = list(seeds)

        def one(seed: int) -> bool:
            return position_rank_analysis(simulate_url_stream(config, seed)).is_non_decreasing()

        shapes = self._map(one, seeds, "position-rank")
        study = SeedSweepStudy(name="position_rank", seeds=seeds, values=[float(s) for s in shapes], passed=shapes)
        logger.info(f"Position-rank study: {study.pass_count}/{len(seeds)} seeds non-decreasing")
        self.studies["position_rank"] = study
        return study

    def run_urn_reduction_study(self, steps: int = 8, replicates: int = 100_000, seed: int = 0) -> UrnReductionStudy:
        """Compare urn-mode tag streams with the exact urn law"""
        exact = exact_fraction_distribution(initial_urn({"red": 1, "black": 1}), steps, "red")
        fractions = urn_reduction_fractions(steps, replicates, seed)

        # terminal fraction k/(steps+2) maps back to k red balls exactly
        tally = Counter(int(round(f * (steps + 2))) for f in fractions)
        empirical = {f"{red}/{steps + 2}": n / replicates for red, n in sorted(tally.items())}
        study = UrnReductionStudy(
            steps=steps,
            replicates=replicates,
            exact={f"{int(f * (steps + 2))}/{steps + 2}": float(p) for f, p in exact.atoms.items()},
            empirical=empirical,
        )
        logger.info(f"Urn-reduction study: max atom error {study.max_abs_error:.4f}")
        self.studies["urn_reduction"] = study
        return study

    def save_results(self, output_dir: Path) -> None:
        """
        Save every study run so far

        Args:
            output_dir: Directory to save results
        """
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)

        for name, study in self.studies.items():
            study_file = output_dir / f"{name}.json"
            with open(study_file, "w", encoding="utf-8") as f:
                json.dump(study.model_dump(mode="json"), f, indent=2)
            logger.info(f"Saved {name} study to {study_file}")
