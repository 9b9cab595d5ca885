import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nfbeam import ArrayConfig


@pytest.fixture(scope="session")
def cfg512() -> ArrayConfig:
    """The headline configuration: N = 512 at 100 GHz."""
    return ArrayConfig(512, 100e9)


@pytest.fixture(scope="session")
def cfg256() -> ArrayConfig:
    """Desk-scale configuration for Monte-Carlo tests."""
    return ArrayConfig(256, 100e9)


@pytest.fixture(scope="session")
def cfg64() -> ArrayConfig:
    """Small configuration for brute-force comparisons."""
    return ArrayConfig(64, 100e9)
