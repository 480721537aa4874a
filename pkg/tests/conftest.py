"""Shared fixtures for the tomokit test suite"""

import numpy as np
import pytest

from tomokit.phase_space.model import FockState, GaussianState, Window, gaussian_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def vacuum():
    return GaussianState.vacuum()


@pytest.fixture
def squeezed():
    """Classical Gaussian below the uncertainty bound at hbar = 1"""
    return GaussianState.single_mode(0.1, 0.1)


@pytest.fixture
def vacuum_grid(vacuum):
    return gaussian_grid(vacuum, Window.default())


@pytest.fixture
def thermal_grid():
    return gaussian_grid(GaussianState.isotropic(1.5), Window.default())


@pytest.fixture
def correlated_state():
    return GaussianState.single_mode(1.0, 0.8, 0.3, mean_q=0.5, mean_p=-0.3)


@pytest.fixture
def correlated_grid(correlated_state):
    return gaussian_grid(correlated_state, Window.default())


@pytest.fixture
def fock1_grid():
    return FockState(1).wigner_grid(Window.default())


@pytest.fixture
def no_config(tmp_path):
    return str(tmp_path / "missing.json")
