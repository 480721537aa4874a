import math

import numpy as np
import pytest

from tomokit.config import MAX_DIM, SYMBOL_LEAKAGE_TOL
from tomokit.errors import DomainError, HermiticityError
from tomokit.phase_space.model import GaussianState, PhaseGrid, Window, gaussian_grid
from tomokit.quantization.basis import (check_dim, hermite_functions, momentum_matrix, position_matrix,
                                        wavefunction)
from tomokit.quantization.weyl import (OperatorMatrix, matrix_to_symbol, polynomial_coefficients,
                                       positivity_functional, symbol_to_matrix, wigner_of_density)


def test_hermite_functions_are_orthonormal():
    x = np.linspace(-15.0, 15.0, 3001)
    psi = hermite_functions(10, x)
    gram = psi @ psi.T * (x[1] - x[0])
    np.testing.assert_allclose(gram, np.eye(10), atol=1e-10)


def test_canonical_commutator():
    dim = 12
    q, p = position_matrix(dim), momentum_matrix(dim)
    np.testing.assert_allclose(q, q.conj().T)
    np.testing.assert_allclose(p, p.conj().T)
    commutator = q @ p - p @ q
    # the last level feels the truncation
    np.testing.assert_allclose(commutator[:-1, :-1], 1j * np.eye(dim - 1), atol=1e-12)


def test_check_dim():
    assert check_dim(8) == 8
    for bad in (0, 1.5, MAX_DIM + 1):
        with pytest.raises(DomainError):
            check_dim(bad)


def test_wavefunction_combines_levels():
    x = np.linspace(-3.0, 3.0, 7)
    psi = wavefunction([1.0, 0.0, 2.0])
    expected = hermite_functions(3, x)[0] + 2.0 * hermite_functions(3, x)[2]
    np.testing.assert_allclose(psi(x), expected)


def test_vacuum_quantizes_to_ground_projector(vacuum_grid):
    a = symbol_to_matrix(vacuum_grid, dim=16)
    expected = np.zeros((16, 16))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(a.entries, expected, atol=1e-6)
    assert a.hermitian
    assert a.leakage < 1e-6
    assert a.warnings == ()


def test_fock_state_quantizes_to_projector(fock1_grid):
    a = symbol_to_matrix(fock1_grid, dim=8)
    assert a.entries[1, 1].real == pytest.approx(1.0, abs=1e-6)
    assert abs(a.entries[0, 0]) < 1e-6
    assert a.trace.real == pytest.approx(1.0, abs=1e-6)


def test_matrix_to_symbol_of_ground_projector():
    entries = np.zeros((16, 16))
    entries[0, 0] = 1.0
    g = matrix_to_symbol(OperatorMatrix(entries, hermitian=True), Window.default(), kind="wigner")
    Q, P = g.window.mesh()
    np.testing.assert_allclose(g.values, 2.0 * np.exp(-Q * Q - P * P), atol=1e-6)
    assert g.mass() == pytest.approx(1.0, abs=1e-6)


def test_operator_matrix_validation():
    with pytest.raises(DomainError):
        OperatorMatrix(np.zeros((2, 3)))
    with pytest.raises(HermiticityError):
        OperatorMatrix([[0.0, 1.0], [0.0, 0.0]], hermitian=True)
    a = OperatorMatrix(np.diag([1.0, 2.0, 3.0]))
    assert a.truncated(2).dim == 2
    assert (a @ a).trace == pytest.approx(14.0)


def test_wigner_of_sampled_ground_state():
    x = np.linspace(-8.0, 8.0, 201)
    psi0 = hermite_functions(1, x)[0]
    g = wigner_of_density(np.outer(psi0, psi0), x)
    assert g.kind == "wigner"
    assert g.values[100, 100] == pytest.approx(2.0, abs=1e-8)
    assert g.mass() == pytest.approx(1.0, abs=1e-6)


def test_wigner_of_density_validation():
    x = np.linspace(-1.0, 1.0, 5)
    with pytest.raises(DomainError):
        wigner_of_density(np.eye(4), x)
    with pytest.raises(DomainError):
        wigner_of_density(np.eye(5), np.linspace(0.0, 1.0, 5))
    rho = np.eye(5)
    rho[0, 1] = 1.0
    with pytest.raises(HermiticityError):
        wigner_of_density(rho, x)


def test_positivity_functional_of_vacuum(vacuum_grid):
    assert positivity_functional(vacuum_grid, wavefunction([1.0])) == pytest.approx(2.0 * math.pi, rel=1e-6)
    assert abs(positivity_functional(vacuum_grid, wavefunction([0.0, 1.0]))) < 1e-6


def test_positivity_functional_detects_classical_state():
    g = gaussian_grid(GaussianState.single_mode(0.1, 0.1), Window.default())
    value = positivity_functional(g, wavefunction([0.0, 1.0]))
    assert value < 0
    assert value == pytest.approx(2.0 * math.pi * (-10.0 / 9.0), rel=1e-4)


def test_positivity_functional_needs_grid_for_samples(vacuum_grid):
    with pytest.raises(DomainError):
        positivity_functional(vacuum_grid, np.ones(5))


def _symbol(func, window=None):
    return PhaseGrid.from_function(func, window or Window.default(), kind="symbol")


def test_polynomial_coefficients():
    assert polynomial_coefficients(_symbol(lambda Q, P: Q)) == pytest.approx({(1, 0): 1.0})
    coefficients = polynomial_coefficients(_symbol(lambda Q, P: 3.0 + Q * P - 0.5 * P ** 4))
    assert coefficients == pytest.approx({(0, 0): 3.0, (1, 1): 1.0, (0, 4): -0.5})
    assert polynomial_coefficients(_symbol(lambda Q, P: np.cos(Q))) is None
    assert polynomial_coefficients(_symbol(lambda Q, P: Q ** 5)) is None


def test_coordinate_symbols_quantize_to_ladder_matrices():
    q = symbol_to_matrix(_symbol(lambda Q, P: Q), 64)
    np.testing.assert_allclose(q.entries, position_matrix(64), atol=1e-9)
    assert q.hermitian
    assert q.warnings == ()
    p = symbol_to_matrix(_symbol(lambda Q, P: P), 64)
    np.testing.assert_allclose(p.entries, momentum_matrix(64), atol=1e-9)

    Qm, Pm = position_matrix(66), momentum_matrix(66)
    qp = symbol_to_matrix(_symbol(lambda Q, P: Q * P), 64)
    np.testing.assert_allclose(qp.entries, (0.5 * (Qm @ Pm + Pm @ Qm))[:64, :64], atol=1e-8)
    ladder = symbol_to_matrix(_symbol(lambda Q, P: (Q + 1j * P) / math.sqrt(2.0)), 16)
    assert not ladder.hermitian
    np.testing.assert_allclose(ladder.entries, np.diag(np.sqrt(np.arange(1, 16)), 1), atol=1e-9)


def test_clipped_symbol_reports_leakage():
    a = symbol_to_matrix(_symbol(lambda Q, P: np.cos(Q)), 64)
    assert a.leakage > SYMBOL_LEAKAGE_TOL
    assert len(a.warnings) == 1
    assert a.warnings[0].startswith("truncation leakage")


def test_decaying_symbol_reads_back():
    a = symbol_to_matrix(_symbol(lambda Q, P: np.exp(-Q * Q - P * P / 2.0)), 32)
    assert a.leakage < SYMBOL_LEAKAGE_TOL
    assert a.warnings == ()


def test_random_hermitian_round_trip(rng):
    m = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    a = OperatorMatrix(0.5 * (m + m.conj().T), hermitian=True)
    window = Window.square(12.0, 257)
    g = matrix_to_symbol(a, window)
    b = symbol_to_matrix(g, 32)
    assert np.linalg.norm(b.entries - a.entries) / np.linalg.norm(a.entries) < 1e-3
    back = matrix_to_symbol(b, window)
    w = g.weights()
    assert np.sum(w * np.abs(back.values - g.values)) / np.sum(w * np.abs(g.values)) < 1e-3


def test_first_excited_state_is_negative_at_origin():
    entries = np.zeros((8, 8))
    entries[1, 1] = 1.0
    g = matrix_to_symbol(OperatorMatrix(entries, hermitian=True), Window.default(257), kind="wigner")
    assert g.values[128, 128] == pytest.approx(-2.0, abs=1e-6)
    assert g.values.min() == pytest.approx(-2.0, abs=1e-6)


def test_transposed_density_mirrors_momentum():
    c = np.zeros(8, dtype=complex)
    c[0], c[1] = 1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0)
    rho = np.outer(c, c.conj())
    window = Window.default(257)
    g = matrix_to_symbol(OperatorMatrix(rho, hermitian=True), window, kind="wigner")
    flipped = matrix_to_symbol(OperatorMatrix(rho.T, hermitian=True), window, kind="wigner")
    assert np.max(np.abs(g.values - g.values[:, ::-1])) > 0.1
    np.testing.assert_allclose(flipped.values, g.values[:, ::-1], atol=1e-9)

    x = np.linspace(-8.0, 8.0, 201)
    psi = wavefunction(c)(x)
    kernel = np.outer(psi, psi.conj())
    np.testing.assert_allclose(wigner_of_density(kernel.T, x).values, wigner_of_density(kernel, x).values[:, ::-1],
                               atol=1e-9)
