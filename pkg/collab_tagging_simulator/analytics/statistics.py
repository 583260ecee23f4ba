"""
Statistical helpers: least-squares fits and the one-sample KS test
"""

import logging
import math
from typing import Sequence

import numpy as np
from scipy import stats

from collab_tagging_simulator.core.config import Config
from collab_tagging_simulator.core.data_models import KSResult, RegressionResult
from collab_tagging_simulator.core.exceptions import (
    ArgumentError, DegenerateInputError, DomainError, EmptyInputError
)

logger = logging.getLogger(__name__)

# Asymptotic Kolmogorov critical constants c(alpha); D passes when D < c / sqrt(n)
KS_CRITICAL_CONSTANTS = {
    0.01: 1.628,
    0.05: 1.358,
    0.10: 1.224,
}


def ols_r2(xs: Sequence[float], ys: Sequence[float]) -> RegressionResult:
    """
    Ordinary least squares with intercept

    Args:
        xs: Predictor values
        ys: Response values

    Returns:
        RegressionResult with slope, intercept and r2 = 1 - SSres/SStot
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape:
        raise ArgumentError(f"xs and ys differ in length ({x.size} vs {y.size})")
    if x.size < 3:
        raise ArgumentError(f"regression needs at least 3 points, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateInputError("xs have zero variance")
    if np.ptp(y) == 0:
        raise DegenerateInputError("ys have zero variance")

    fit = stats.linregress(x, y)
    r2 = min(max(float(fit.rvalue) ** 2, 0.0), 1.0)
    return RegressionResult(slope=float(fit.slope), intercept=float(fit.intercept), r2=r2, n=int(x.size))


def critical_constant(alpha: float) -> float:
    """c(alpha) from the table, else from the Kolmogorov distribution"""
    for level, constant in KS_CRITICAL_CONSTANTS.items():
        if math.isclose(alpha, level):
            return constant
    return float(stats.kstwobign.isf(alpha))


def ks_statistic(samples: Sequence[float], alpha: float = Config.KS_ALPHA) -> KSResult:
    """
    One-sample Kolmogorov-Smirnov test against Uniform(0, 1)

    Args:
        samples: Values in [0, 1]
        alpha: Significance level

    Returns:
        KSResult with D, the critical value c(alpha)/sqrt(n) and the verdict
    """
    values = np.asarray(samples, dtype=float).ravel()
    if values.size == 0:
        raise EmptyInputError("KS test needs at least one sample")
    if not 0.0 < alpha < 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    if not np.all((values >= 0.0) & (values <= 1.0)):
        raise DomainError("KS samples must lie in [0, 1]")

    result = stats.kstest(values, "uniform")
    statistic = min(max(float(result.statistic), 0.0), 1.0)
    critical = critical_constant(alpha) / math.sqrt(values.size)
    return KSResult(
        statistic=statistic,
        n=int(values.size),
        alpha=alpha,
        critical_value=critical,
        passed=statistic < critical,
        p_value=min(max(float(result.pvalue), 0.0), 1.0),
    )
