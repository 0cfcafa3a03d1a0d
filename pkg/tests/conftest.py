import os
import sys

import pytest

# Same import root as qw.py
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from core.state import RatchetSpec, WalkConfig  # noqa: E402


@pytest.fixture
def repo_root():
    return ROOT


@pytest.fixture
def single_class():
    return RatchetSpec()


@pytest.fixture
def two_classes():
    return RatchetSpec(classes=(0, 1))


@pytest.fixture
def resonant_walk():
    return WalkConfig(kick_strength=2.0, steps=6)
