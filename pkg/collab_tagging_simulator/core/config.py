"""
Configuration Management for the Collaborative Tagging Simulator
Centralized defaults read from environment variables
"""

import os
import warnings
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Global configuration class"""

    # ========================================================================
    # Tag Stream Simulation Defaults
    # ========================================================================
    TAGSIM_IMITATION_PROB: float = float(os.getenv("TAGSIM_IMITATION_PROB", "0.8"))
    TAGSIM_TOP_K: int = int(os.getenv("TAGSIM_TOP_K", "5"))  # the interface shows "a few" popular tags
    TAGSIM_VOCAB_SIZE: int = int(os.getenv("TAGSIM_VOCAB_SIZE", "5"))
    TAGSIM_INNOVATION_PROB: float = float(os.getenv("TAGSIM_INNOVATION_PROB", "0.0"))
    TAGSIM_MAX_TAGS_PER_BOOKMARK: int = int(os.getenv("TAGSIM_MAX_TAGS_PER_BOOKMARK", "3"))
    TAGSIM_TOTAL_BOOKMARKS: int = int(os.getenv("TAGSIM_TOTAL_BOOKMARKS", "2000"))
    TAGSIM_REDRAW_LIMIT: int = int(os.getenv("TAGSIM_REDRAW_LIMIT", "100"))
    TAGSIM_START_TIME: str = os.getenv("TAGSIM_START_TIME", "2005-01-01T00:00:00Z")

    # ========================================================================
    # Arrival Schedule Defaults
    # ========================================================================
    ARRIVAL_RATE_PER_DAY: float = float(os.getenv("ARRIVAL_RATE_PER_DAY", "10.0"))
    ARRIVAL_DURATION_DAYS: float = float(os.getenv("ARRIVAL_DURATION_DAYS", "365.0"))

    # ========================================================================
    # Analysis Defaults
    # ========================================================================
    ANALYSIS_EPSILON: float = float(os.getenv("ANALYSIS_EPSILON", "0.05"))
    ANALYSIS_WINDOW: int = int(os.getenv("ANALYSIS_WINDOW", "100"))  # "first 100 or so bookmarks"
    KS_ALPHA: float = float(os.getenv("KS_ALPHA", "0.01"))

    # ========================================================================
    # Runtime
    # ========================================================================
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))
    WORKERS: int = int(os.getenv("WORKERS", "1"))
    SHOW_PROGRESS: bool = os.getenv("SHOW_PROGRESS", "false").lower() == "true"
    MAX_EXACT_STEPS: int = int(os.getenv("MAX_EXACT_STEPS", "16"))

    # ========================================================================
    # Paths
    # ========================================================================
    RESULTS_DIR: Path = Path(os.getenv("RESULTS_DIR", "./results"))

    # ========================================================================
    # Logging Configuration
    # ========================================================================
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("LOG_FILE", "")

    @classmethod
    def validate(cls) -> bool:
        """Validate configured defaults"""
        for name in ("TAGSIM_IMITATION_PROB", "TAGSIM_INNOVATION_PROB"):
            value = getattr(cls, name)
            if not 0.0 <= value <= 1.0:
                warnings.warn(f"{name}={value} is outside [0, 1]; runs using it will be rejected", UserWarning)

        if cls.TAGSIM_TOP_K < 1:
            warnings.warn(f"TAGSIM_TOP_K={cls.TAGSIM_TOP_K} must be >= 1", UserWarning)

        if cls.ANALYSIS_WINDOW < 2:
            warnings.warn(f"ANALYSIS_WINDOW={cls.ANALYSIS_WINDOW} must be >= 2", UserWarning)

        if cls.MAX_EXACT_STEPS > 16:
            warnings.warn(
                f"MAX_EXACT_STEPS={cls.MAX_EXACT_STEPS} exceeds 16; exact enumeration may not finish",
                UserWarning
            )

        return True

    @classmethod
    def get_sim_config(cls) -> dict:
        """Get tag stream simulation defaults"""
        vocab_size = max(cls.TAGSIM_VOCAB_SIZE, 1)
        max_tags = max(cls.TAGSIM_MAX_TAGS_PER_BOOKMARK, 1)
        return {
            "imitation_prob": cls.TAGSIM_IMITATION_PROB,
            "top_k": cls.TAGSIM_TOP_K,
            "shared_vocab": {f"t{i}": 1.0 / vocab_size for i in range(vocab_size)},
            "innovation_prob": cls.TAGSIM_INNOVATION_PROB,
            "tags_per_bookmark": {m: 1.0 / max_tags for m in range(1, max_tags + 1)},
            "total_bookmarks": cls.TAGSIM_TOTAL_BOOKMARKS,
            "redraw_limit": cls.TAGSIM_REDRAW_LIMIT,
            "start_time": cls.TAGSIM_START_TIME,
            "seed": cls.DEFAULT_SEED,
        }

    @classmethod
    def get_arrival_config(cls) -> dict:
        """Get default arrival schedule"""
        return {
            "segments": [(cls.ARRIVAL_DURATION_DAYS, cls.ARRIVAL_RATE_PER_DAY)],
            "burst": None,
        }

    @classmethod
    def get_analysis_config(cls) -> dict:
        """Get analysis parameter defaults"""
        return {
            "epsilon": cls.ANALYSIS_EPSILON,
            "window": cls.ANALYSIS_WINDOW,
            "alpha": cls.KS_ALPHA,
        }


# Validate configuration on import
Config.validate()
