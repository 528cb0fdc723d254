"""Shared pytest configuration and fixtures for the dftn test suite.

This module provides:
- Seeded random generators and small network/fusion fixtures
- A tiny synthetic dataset for training and CLI tests
- Marker registration (unit, integration, slow)
"""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

# Add src/ to path so test modules can import the dftn package
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

# keep test runs out of the user's log directory
os.environ.setdefault("DFTN_LOG_DIR", tempfile.mkdtemp(prefix="dftn-test-logs-"))

from dftn.data.synth import synth_dataset  # noqa: E402
from dftn.fusion import build_fusion_spec  # noqa: E402
from dftn.model.network import NetworkConfig  # noqa: E402

TINY_BRANCHES = (("hand", 2), ("back", 2))


@pytest.fixture
def rng():
    """Provide a fixed-seed numpy generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_network():
    """A three-block network small enough for finite differences."""
    return NetworkConfig(
        num_classes=3,
        window_t=24,
        kernels=(3, 3, 2),
        filters=(3, 3, 2),
        strides=(1, 1, 1),
        pools=(2, 1, 1),
        dense_units=6,
    )


@pytest.fixture
def tiny_fusion():
    return build_fusion_spec("late", [("hand", 0, 2), ("back", 2, 4)], [])


@pytest.fixture
def tiny_dataset():
    """Three well separated classes over two two-channel branches."""
    return synth_dataset(
        classes=3,
        branches=TINY_BRANCHES,
        windows_per_class=12,
        seed=5,
        window_t=24,
        noise=0.0,
    )


def pytest_configure(config):
    """Register custom pytest markers."""
    config.addinivalue_line("markers", "unit: mark test as a unit test (fast, isolated)")
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test (slower)"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow (deselect with '-m \"not slow\"')"
    )


def pytest_collection_modifyitems(config, items):
    """Auto-mark tests based on their location."""
    for item in items:
        if "integration" not in item.nodeid:
            item.add_marker(pytest.mark.unit)
