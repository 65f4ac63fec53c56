import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from repparity.rng import RandomnessHandle  # noqa: E402


@pytest.fixture
def rnd():
    return RandomnessHandle(20260101)
