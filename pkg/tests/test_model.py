import math

import numpy as np
import pytest

from tomokit.errors import DensityError, DomainError, FrameError, NormalizationError, ScaleError
from tomokit.phase_space.model import (FockState, Frame, GaussianState, Moments, PhaseGrid, ScaleParams, Window,
                                       frame_from_polar, gaussian_grid)


def test_gaussian_grid_is_normalized(vacuum_grid, correlated_grid):
    assert abs(vacuum_grid.mass() - 1.0) < 1e-9
    assert abs(correlated_grid.mass() - 1.0) < 1e-9


def test_wigner_grid_mass_uses_two_pi(vacuum):
    g = gaussian_grid(vacuum, kind="wigner")
    assert g.kind == "wigner"
    assert abs(g.mass() - 1.0) < 1e-9
    assert abs(g.values.max() - 2.0) < 1e-2
    np.testing.assert_allclose(g.as_density_values(), gaussian_grid(vacuum).values)


def test_density_rejects_negative_values():
    window = Window.square(4.0, 41)
    values = np.full((41, 41), 1.0 / 64.0)
    values[20, 20] = -0.1
    with pytest.raises(DensityError) as err:
        PhaseGrid(-4, 4, -4, 4, values)
    assert err.value.min_value == pytest.approx(-0.1)
    # the same values are a legitimate symbol
    PhaseGrid(window.q_min, window.q_max, window.p_min, window.p_max, values, kind="symbol")


def test_density_rejects_bad_normalization():
    with pytest.raises(NormalizationError) as err:
        PhaseGrid(-1, 1, -1, 1, np.ones((11, 11)))
    assert err.value.integral == pytest.approx(4.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        PhaseGrid(-1, 1, -1, 1, np.ones((11, 11)), kind="hologram")
    with pytest.raises(DomainError):
        PhaseGrid(1, -1, -1, 1, np.ones((11, 11)), kind="symbol")
    with pytest.raises(DomainError):
        PhaseGrid(-1, 1, -1, 1, np.full((11, 11), np.nan), kind="symbol")
    g = PhaseGrid(-1, 1, -1, 1, np.ones((11, 11)), kind="symbol")
    with pytest.raises(ValueError):
        g.values[0, 0] = 2.0


def test_fock_wigner_negative_at_origin(fock1_grid):
    assert fock1_grid.kind == "wigner"
    assert FockState(1).wigner(0.0, 0.0) == pytest.approx(-2.0)
    assert abs(fock1_grid.mass() - 1.0) < 1e-9
    assert fock1_grid.values.min() < -1.98


def test_fock_hbar_scaling():
    # W_hbar(q, p) = W_1(q/sqrt(hbar), p/sqrt(hbar)) / hbar
    hbar = 0.25
    assert FockState(2, hbar).wigner(0.3, 0.1) == pytest.approx(FockState(2).wigner(0.6, 0.2) / hbar)
    np.testing.assert_allclose(FockState(3, hbar).moments().sigma, 3.5 * hbar * np.eye(2))
    with pytest.raises(DomainError):
        FockState(-1)


def test_frames():
    with pytest.raises(FrameError):
        Frame(0.0, 0.0)
    assert frame_from_polar(0.0, math.pi / 2).as_tuple() == (0.0, 1.0)
    f = frame_from_polar(math.log(2.0), 0.0)
    assert f.as_tuple() == pytest.approx((2.0, 0.0))
    assert Frame(3.0, 4.0).norm == 5.0
    assert Frame(1.0, 1.0).scaled(-2.0).as_tuple() == (-2.0, -2.0)


def test_scale_params_group():
    s = ScaleParams(2.0, -0.5)
    assert s.compose(s.inverse()) == ScaleParams.identity()
    assert s.products() == pytest.approx([1.0])
    assert ScaleParams.uniform(2.0, 3.0, n_modes=2).vector().tolist() == [2.0, 2.0, 3.0, 3.0]
    with pytest.raises(ScaleError):
        ScaleParams(0.0, 1.0)
    with pytest.raises(ScaleError):
        ScaleParams((1.0, 2.0), (1.0,))
    with pytest.raises(ScaleError):
        s.compose(ScaleParams.identity(2))


def test_moments_validation():
    m = Moments([0.0, 0.0], [[1.0, 0.2], [0.2, 2.0]])
    assert m.d == pytest.approx(1.96)
    assert m.t == pytest.approx(3.0)
    assert m.sigma_qp == pytest.approx(0.2)
    with pytest.raises(DomainError):
        Moments([0.0, 0.0], [[1.0, 0.2], [0.3, 2.0]])
    with pytest.raises(DomainError):
        Moments([0.0], [[1.0, 0.0], [0.0, 1.0]])


def test_gaussian_state_rejects_invalid_dispersion():
    with pytest.raises(DomainError):
        GaussianState.single_mode(-1.0, 1.0)
    with pytest.raises(DomainError):
        GaussianState.single_mode(1.0, 1.0, 2.0)


def test_multimode_moment_blocks():
    state = GaussianState.isotropic(0.5, n_modes=2)
    m = state.moments()
    assert m.n_modes == 2
    np.testing.assert_allclose(m.mode_block(1), 0.5 * np.eye(2))
