"""
Polya Urn - Reinforcement Kernel
Draw a ball, put it back with one more of the same color.

Every draw consumes exactly one ``rng.random()`` uniform u: the drawn color is
the first one whose cumulative count exceeds ``u * total``. The scalar path
(``urn_draw``/``simulate_urn``) and the vectorized path
(``limit_fraction_samples``) apply the same comparison to the same uniforms,
so replicate r of the latter is exactly ``simulate_urn(init, steps, sub_seed(seed, r))``.
"""

import bisect
import logging
from collections import defaultdict
from fractions import Fraction
from itertools import accumulate
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import FractionDistribution, UrnState, UrnTrajectory
from collab_tagging_simulator.core.exceptions import ArgumentError, ResourceLimitError
from collab_tagging_simulator.core.rng import SeedLike, format_seed, make_rng, sub_seed

logger = logging.getLogger(__name__)

# Upper bound on replicates x steps uniforms held in memory at once
_CHUNK_ELEMENTS = 4_000_000


def initial_urn(counts: Union[Mapping[str, int], Sequence[int]]) -> UrnState:
    """
    Build a step-0 urn

    Args:
        counts: color -> balls, or bare counts named c0, c1, ...

    Returns:
        UrnState at step 0
    """
    if isinstance(counts, Mapping):
        named = {str(color): int(n) for color, n in counts.items()}
    else:
        named = {f"c{i}": int(n) for i, n in enumerate(counts)}
    return UrnState(counts=named, step=0)


def _pick(cumulative: List[int], total: int, u: float) -> int:
    return bisect.bisect_right(cumulative, u * total)


def urn_step(state: UrnState, drawn: str) -> UrnState:
    """Add one ball of the drawn color"""
    if drawn not in state.counts:
        raise ArgumentError(f"color {drawn!r} is not in the urn {sorted(state.counts)}")
    counts = dict(state.counts)
    counts[drawn] += 1
    return UrnState(counts=counts, step=state.step + 1)


def urn_draw(state: UrnState, rng: np.random.Generator) -> str:
    """Draw a color with probability proportional to its ball count"""
    colors = state.colors
    cumulative = list(accumulate(state.counts[color] for color in colors))
    return colors[_pick(cumulative, cumulative[-1], float(rng.random()))]


def simulate_urn(init: UrnState, steps: int, seed: SeedLike) -> UrnTrajectory:
    """
    Run the urn for a number of draws

    Args:
        init: Starting state
        steps: Number of draw + reinforce steps
        seed: Seed or seed path

    Returns:
        UrnTrajectory with the counts after every step
    """
    if steps < 0:
        raise ArgumentError(f"steps must be >= 0, got {steps}")

    rng = make_rng(seed)
    colors = tuple(init.colors)
    counts = [init.counts[color] for color in colors]
    rows = [tuple(counts)]

    for u in rng.random(steps):
        index = _pick(list(accumulate(counts)), sum(counts), float(u))
        counts[index] += 1
        rows.append(tuple(counts))

    return UrnTrajectory(colors=colors, counts=tuple(rows), seed=format_seed(seed))


def _color_index(state: UrnState, color: Optional[str]) -> int:
    if color is None:
        return 0
    if color not in state.counts:
        raise ArgumentError(f"color {color!r} is not in the urn {sorted(state.counts)}")
    return state.colors.index(color)


def exact_fraction_distribution(init: UrnState, steps: int, color: Optional[str] = None) -> FractionDistribution:
    """
    Exact law of a color's fraction after ``steps`` draws

    Paths reaching the same count vector are merged, so the work grows with
    the number of reachable count vectors rather than colors ** steps.
    """
    if steps < 0:
        raise ArgumentError(f"steps must be >= 0, got {steps}")
    if steps > Config.MAX_EXACT_STEPS:
        raise ResourceLimitError(
            f"exact enumeration is limited to {Config.MAX_EXACT_STEPS} steps, got {steps}"
        )

    index = _color_index(init, color)
    colors = init.colors
    layer: Dict[tuple, Fraction] = {tuple(init.counts[c] for c in colors): Fraction(1)}

    for _ in range(steps):
        following: Dict[tuple, Fraction] = defaultdict(Fraction)
        for counts, probability in layer.items():
            total = sum(counts)
            for i, count in enumerate(counts):
                grown = counts[:i] + (count + 1,) + counts[i + 1:]
                following[grown] += probability * Fraction(count, total)
        layer = following

    atoms: Dict[Fraction, Fraction] = defaultdict(Fraction)
    for counts, probability in layer.items():
        atoms[Fraction(counts[index], sum(counts))] += probability

    logger.debug(f"Exact distribution over {len(layer)} count vectors, {len(atoms)} atoms")
    return FractionDistribution(color=colors[index], steps=steps, atoms=dict(sorted(atoms.items())))


def expected_next_fraction(state: UrnState, color: str) -> Fraction:
    """One-step expectation of a color's fraction, enumerated exactly"""
    index = _color_index(state, color)
    total = state.total
    counts = [state.counts[c] for c in state.colors]
    expectation = Fraction(0)
    for i, count in enumerate(counts):
        after = counts[index] + (1 if i == index else 0)
        expectation += Fraction(count, total) * Fraction(after, total + 1)
    return expectation


def limit_fraction_samples(
    init: UrnState,
    steps: int,
    replicates: int,
    seed: SeedLike,
    color: Optional[str] = None
) -> np.ndarray:
    """
    Terminal fraction of one color across independent replicates

    Args:
        init: Starting state shared by all replicates
        steps: Draws per replicate
        replicates: Number of replicates
        seed: Seed or seed path; replicate r uses sub_seed(seed, r)
        color: Color to report (defaults to the first)

    Returns:
        Array of terminal fractions in replicate order
    """
    if replicates < 1:
        raise ArgumentError(f"replicates must be >= 1, got {replicates}")
    if steps < 0:
        raise ArgumentError(f"steps must be >= 0, got {steps}")

    index = _color_index(init, color)
    colors = init.colors
    generators = [make_rng(sub_seed(seed, r)) for r in range(replicates)]
    counts = np.tile(np.array([init.counts[c] for c in colors], dtype=np.int64), (replicates, 1))
    total = init.total
    chunk = max(1, min(steps, _CHUNK_ELEMENTS // replicates)) if steps else 0
    rows = np.arange(replicates)

    done = 0
    while done < steps:
        width = min(chunk, steps - done)
        uniforms = np.empty((replicates, width), dtype=np.float64)
        for r, generator in enumerate(generators):
            generator.random(out=uniforms[r])

        if len(colors) == 2:
            first = counts[:, 0]
            for j in range(width):
                first += uniforms[:, j] * total < first
                total += 1
            counts[:, 1] = total - first
        else:
            for j in range(width):
                cumulative = np.cumsum(counts, axis=1)
                picked = np.sum(cumulative <= (uniforms[:, j] * total)[:, None], axis=1)
                counts[rows, picked] += 1
                total += 1
        done += width

    logger.debug(f"Sampled {replicates} replicates x {steps} steps from seed {format_seed(seed)}")
    return counts[:, index] / total
