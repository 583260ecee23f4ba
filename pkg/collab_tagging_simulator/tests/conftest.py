"""Shared fixtures for the test suite"""

from datetime import datetime, timedelta, timezone
from typing import Iterable, List, Sequence

import pytest

from collab_tagging_simulator.core.data_models import ArrivalSchedule, Bookmark, SimConfig

EPOCH = datetime(2005, 6, 23, 9, 0, 0, tzinfo=timezone.utc)


def pytest_configure(config):
    """Configure pytest"""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )


class ScriptedRng:
    """Stand-in generator replaying fixed uniforms through random()"""

    def __init__(self, values: Iterable[float]):
        self.values = list(values)
        self.calls = 0

    def random(self) -> float:
        value = self.values[self.calls]
        self.calls += 1
        return value


def bookmark(
    tags: Sequence[str] = (),
    user: str = "u1",
    url: str = "http://a",
    seconds: float = 0,
) -> Bookmark:
    return Bookmark(user=user, url=url, timestamp=EPOCH + timedelta(seconds=seconds), tags=tuple(tags))


def tagged_stream(tag_lists: Sequence[Sequence[str]], url: str = "http://a") -> List[Bookmark]:
    """One bookmark per tag list, a minute apart, each by a different user"""
    return [bookmark(tags, user=f"u{i}", url=url, seconds=60 * i) for i, tags in enumerate(tag_lists)]


@pytest.fixture
def sim_config() -> SimConfig:
    """Small default-shaped simulation config"""
    return SimConfig.from_defaults(total_bookmarks=200, seed=3)


@pytest.fixture
def constant_schedule() -> ArrivalSchedule:
    return ArrivalSchedule.constant(10.0, 365.0)
