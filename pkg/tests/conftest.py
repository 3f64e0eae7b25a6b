import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from naqsim.profile import HardwareProfile, LatticeGeometry, builtin_profile


@pytest.fixture
def default_profile() -> HardwareProfile:
    return builtin_profile("rb87-2023")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20230817)


def line_profile(n_sites: int, radius_sites: float = 1.0, **overrides) -> HardwareProfile:
    """Profile over a 1 x n row of traps; handy for routing tests."""
    params = dict(
        name="test-line",
        qubit_capacity=n_sites,
        lattice=LatticeGeometry(kind="square", spacing=3.0, rows=1, cols=n_sites),
        blockade_radius_sites=radius_sites,
    )
    params.update(overrides)
    return HardwareProfile(**params)


def grid_profile(rows: int, cols: int, radius_sites: float = 1.0, **overrides) -> HardwareProfile:
    params = dict(
        name="test-grid",
        qubit_capacity=rows * cols,
        lattice=LatticeGeometry(kind="square", spacing=3.0, rows=rows, cols=cols),
        blockade_radius_sites=radius_sites,
    )
    params.update(overrides)
    return HardwareProfile(**params)
