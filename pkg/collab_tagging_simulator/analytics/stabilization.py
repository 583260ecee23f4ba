"""
Stabilization of cumulative tag proportions
"""

import logging
from typing import Optional

import numpy as np
import pandas as pd

from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import ProportionTrajectory, StabilityReport
from collab_tagging_simulator.core.exceptions import ArgumentError, InsufficientDataError

logger = logging.getLogger(__name__)


def detect_stabilization(
    trajectory: ProportionTrajectory,
    epsilon: Optional[float] = None,
    window: Optional[int] = None
) -> StabilityReport:
    """
    Find the first bookmark index from which every tag's proportion stays
    within ``epsilon`` for ``window`` consecutive bookmarks

    Start indices run over 1..T-window so that the index plus the window never
    passes the trajectory end. A tag absent at some index counts as 0 there.

    Args:
        trajectory: Cumulative proportion trajectory of one URL
        epsilon: Largest allowed max-min range per tag
        window: Number of bookmarks per window

    Returns:
        StabilityReport; stabilization_index is None when no window qualifies
    """
    epsilon = Config.ANALYSIS_EPSILON if epsilon is None else epsilon
    window = Config.ANALYSIS_WINDOW if window is None else window
    if epsilon <= 0:
        raise ArgumentError(f"epsilon must be > 0, got {epsilon}")
    if window < 2:
        raise ArgumentError(f"window must be >= 2, got {window}")
    length = trajectory.length
    if length < window:
        raise InsufficientDataError(f"trajectory of {length} bookmarks is shorter than window {window}")

    index = None
    matrix = trajectory.as_matrix()
    if length > window and matrix.shape[1] == 0:
        index = 1
    elif length > window:
        rolling = pd.DataFrame(matrix).rolling(window)
        # row j holds the range over rows j-window+1..j, i.e. start index t = j-window+2
        ranges = (rolling.max() - rolling.min()).to_numpy()[window - 1:length - 1]
        settled = np.all(ranges <= epsilon, axis=1)
        hits = np.flatnonzero(settled)
        if hits.size:
            index = int(hits[0]) + 1

    final = trajectory.vectors[-1].fractions
    logger.debug(f"Stabilization of {trajectory.key or 'trajectory'}: index={index} (eps={epsilon}, window={window})")
    return StabilityReport(
        key=trajectory.key,
        stabilization_index=index,
        epsilon=epsilon,
        window=window,
        trajectory_length=length,
        final_proportions=dict(final),
    )
