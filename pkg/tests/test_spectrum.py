import numpy as np
import pytest

from tomokit.errors import HermiticityError
from tomokit.phase_space.model import GaussianState, Window, gaussian_grid
from tomokit.quantization.spectrum import spectral_decompose
from tomokit.quantization.weyl import OperatorMatrix, symbol_to_matrix


def test_ordering_and_weights():
    s = spectral_decompose(OperatorMatrix(np.diag([0.2, -0.5, 0.3])))
    np.testing.assert_allclose(s.eigenvalues, [-0.5, 0.3, 0.2])
    assert s.min_eigenvalue == pytest.approx(-0.5)
    assert s.negative_weight == pytest.approx(-0.5)
    assert s.trace == pytest.approx(0.0)
    np.testing.assert_allclose(s.reassemble(), np.diag([0.2, -0.5, 0.3]), atol=1e-15)


def test_non_hermitian_refused():
    with pytest.raises(HermiticityError) as err:
        spectral_decompose(OperatorMatrix([[1.0, 2.0], [0.0, 1.0]]))
    assert err.value.residual == pytest.approx(2.0)


def test_pure_state_spectrum(vacuum_grid):
    s = spectral_decompose(symbol_to_matrix(vacuum_grid, dim=16))
    assert s.eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
    assert np.max(np.abs(s.eigenvalues[1:])) < 1e-6
    x = np.linspace(-2.0, 2.0, 9)
    # eigenvector phase is arbitrary
    np.testing.assert_allclose(np.abs(s.eigenfunction(0)(x)), np.pi ** -0.25 * np.exp(-0.5 * x * x), atol=1e-6)


def test_classical_state_has_negative_probabilities():
    # isotropic variance 0.1: eigenvalues (2/1.2) * (-0.8/1.2)^n
    g = gaussian_grid(GaussianState.single_mode(0.1, 0.1), Window.default())
    s = spectral_decompose(symbol_to_matrix(g, dim=64))
    assert s.eigenvalues[0] == pytest.approx(5.0 / 3.0, abs=1e-4)
    assert s.eigenvalues[1] == pytest.approx(-10.0 / 9.0, abs=1e-4)
    assert s.trace == pytest.approx(1.0, abs=1e-4)
    assert s.negative_weight < -1.0
