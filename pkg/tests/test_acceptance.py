"""End-to-end checks at full resolution"""

import numpy as np
import pytest

from tomokit.admissibility.classify import gaussian_spectrum
from tomokit.admissibility.reports import nonlimit_demonstration
from tomokit.phase_space.model import FockState, GaussianState, PhaseGrid, Window, gaussian_grid
from tomokit.quantization.spectrum import spectral_decompose
from tomokit.quantization.star import star_classical, star_moyal
from tomokit.quantization.weyl import symbol_to_matrix

pytestmark = pytest.mark.slow


def test_classical_gaussian_spectrum():
    g = gaussian_grid(GaussianState.single_mode(0.1, 0.1), Window.default())
    spectrum = spectral_decompose(symbol_to_matrix(g, dim=128))
    np.testing.assert_allclose(spectrum.eigenvalues[:6], gaussian_spectrum(0.1, 6), atol=1e-6)
    assert spectrum.eigenvalues[0] == pytest.approx(1.6667, abs=1e-4)
    assert spectrum.eigenvalues[1] == pytest.approx(-1.1111, abs=1e-4)


def test_number_state_witness():
    # odd sample count puts a node on the origin
    g = FockState(1).wigner_grid(Window.default(257))
    assert g.values[128, 128] == pytest.approx(-2.0, abs=1e-3)
    spectrum = spectral_decompose(symbol_to_matrix(g, dim=128))
    assert spectrum.min_eigenvalue >= -1e-9
    assert spectrum.eigenvalues[0] == pytest.approx(1.0, abs=1e-6)


def test_moyal_commutator_on_central_window():
    window = Window.default()
    q = PhaseGrid.from_function(lambda Q, P: Q, window, kind="symbol")
    p = PhaseGrid.from_function(lambda Q, P: P, window, kind="symbol")
    product = lambda a, b: star_moyal(a, b, dim=64, method="matrix").values
    commutator = product(q, p) - product(p, q)
    n = window.n_q
    central = commutator[n // 4:3 * n // 4, n // 4:3 * n // 4]
    np.testing.assert_allclose(central, 1j * np.ones_like(central), atol=1e-6)


def test_classical_star_is_commutative(vacuum_grid, fock1_grid):
    ab = star_classical(vacuum_grid, fock1_grid, dim=64)
    ba = star_classical(fock1_grid, vacuum_grid, dim=64)
    np.testing.assert_array_equal(ab.entries, ba.entries)
    pointwise = vacuum_grid.with_values(2.0 * np.pi * vacuum_grid.values * fock1_grid.values, kind="symbol")
    np.testing.assert_allclose(ab.entries, symbol_to_matrix(pointwise, 64).entries, atol=1e-10)


def test_witnesses_at_every_hbar():
    report = nonlimit_demonstration([1.0, 0.1, 0.01], dim=128)
    assert report.sets_differ_everywhere
    assert all(row.classical_witness.quadrant != row.quantum_witness.quadrant for row in report.rows)
