import numpy as np
import pytest

from tomokit.errors import DomainError, NormalizationError, TruncationError
from tomokit.phase_space.model import GaussianState, Window, gaussian_grid
from tomokit.phase_space.symmetry import moments_of_grid, reflect_full, reflect_parity, reflect_time, shift


def test_moments_of_vacuum(vacuum_grid):
    m = moments_of_grid(vacuum_grid)
    np.testing.assert_allclose(m.mean, [0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(m.sigma, 0.5 * np.eye(2), atol=1e-9)


def test_moments_of_correlated_state(correlated_state, correlated_grid):
    m = moments_of_grid(correlated_grid)
    np.testing.assert_allclose(m.mean, correlated_state.mean, atol=1e-9)
    np.testing.assert_allclose(m.sigma, correlated_state.sigma, atol=1e-8)


def test_moments_need_normalized_state(vacuum_grid):
    with pytest.raises(NormalizationError):
        moments_of_grid(vacuum_grid.with_values(2.0 * vacuum_grid.values, kind="wigner"))
    with pytest.raises(DomainError):
        moments_of_grid(vacuum_grid.with_values(vacuum_grid.values, kind="symbol"))


def test_reflections_flip_means(correlated_grid):
    m = moments_of_grid(reflect_time(correlated_grid))
    assert m.mean == pytest.approx([0.5, 0.3], abs=1e-9)
    assert m.sigma_qp == pytest.approx(-0.3, abs=1e-8)

    m = moments_of_grid(reflect_parity(correlated_grid))
    assert m.mean == pytest.approx([-0.5, -0.3], abs=1e-9)

    m = moments_of_grid(reflect_full(correlated_grid))
    assert m.mean == pytest.approx([-0.5, 0.3], abs=1e-9)
    assert m.sigma_qp == pytest.approx(0.3, abs=1e-8)


def test_reflection_is_an_involution(fock1_grid):
    np.testing.assert_array_equal(reflect_time(reflect_time(fock1_grid)).values, fock1_grid.values)


def test_asymmetric_window_needs_resample(vacuum):
    g = gaussian_grid(vacuum, Window(-6.0, 8.0, -8.0, 8.0, 281, 257))
    with pytest.raises(DomainError):
        reflect_parity(g)
    reflected = reflect_parity(g, resample=True)
    assert abs(reflected.mass() - 1.0) < 1e-9


def test_shift_translates_window(correlated_grid):
    moved = shift(correlated_grid, 0.5, -0.3)
    m = moments_of_grid(moved)
    assert m.mean == pytest.approx([0.0, 0.0], abs=1e-9)
    assert moved.q_min == pytest.approx(correlated_grid.q_min - 0.5)


def test_shift_resample_keeps_window(vacuum_grid):
    moved = shift(vacuum_grid, 1.0, 0.0, resample=True)
    assert moved.window.same_as(vacuum_grid.window)
    assert moments_of_grid(moved).mean[0] == pytest.approx(-1.0, abs=1e-3)
    with pytest.raises(TruncationError):
        shift(vacuum_grid, 7.0, 0.0, resample=True)


def test_shift_of_zero_is_identity(vacuum_grid):
    assert shift(vacuum_grid, 0.0, 0.0) is vacuum_grid
