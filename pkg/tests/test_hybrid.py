import numpy as np
import pytest

from tomokit.admissibility.hybrid import HybridState, hybrid_factorized
from tomokit.errors import AdmissibilityError, DomainError, NormalizationError
from tomokit.phase_space.model import Frame, GaussianState
from tomokit.tomography.tomogram import FockTomogram, GaussianTomogram, SampledTomogram


def test_quantum_and_classical_parts_combine(vacuum, squeezed):
    state = hybrid_factorized(GaussianTomogram(vacuum), GaussianTomogram(squeezed))
    assert isinstance(state, HybridState)
    f1, f2 = Frame(1.0, 0.0), Frame(0.6, 0.8)
    x1 = np.linspace(-2.0, 2.0, 3)
    x2 = np.linspace(-1.0, 1.0, 4)
    values = state.pdf(x1, x2, f1, f2)
    assert values.shape == (3, 4)
    np.testing.assert_allclose(values, np.outer(state.quantum_part.pdf(x1, f1), state.classical_part.pdf(x2, f2)))
    assert state.normalization(f1, f2) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(state.marginal_quantum(x1, f1, f2), GaussianTomogram(vacuum).pdf(x1, f1), atol=1e-10)
    np.testing.assert_allclose(state.marginal_classical(x2, f1, f2), GaussianTomogram(squeezed).pdf(x2, f2),
                               atol=1e-10)


def test_product_of_vacua_matches_two_mode_vacuum(vacuum):
    state = hybrid_factorized(GaussianTomogram(vacuum), GaussianTomogram(vacuum))
    frames = [(1.0, 0.5), (-0.3, 2.0)]
    joint = GaussianTomogram(GaussianState.vacuum(n_modes=2)).pdf_joint([0.4, -0.7], frames)
    assert state.pdf(0.4, -0.7, *frames)[0, 0] == pytest.approx(joint)


def test_number_state_in_quantum_slot(squeezed):
    state = hybrid_factorized(FockTomogram(1), GaussianTomogram(squeezed))
    assert state.normalization((1.0, 0.0), (0.0, 1.0)) == pytest.approx(1.0, abs=1e-9)


def test_compressed_state_refused_in_quantum_slot(vacuum, squeezed):
    with pytest.raises(AdmissibilityError):
        hybrid_factorized(GaussianTomogram(squeezed), GaussianTomogram(vacuum))
    # at hbar = 0.15 the same state respects the bound
    assert hybrid_factorized(GaussianTomogram(squeezed), GaussianTomogram(vacuum), hbar=0.15).hbar == 0.15


def test_negative_parts_refused(vacuum):
    negative = SampledTomogram([(1.0, 0.0)], -1.0, 1.0, [[0.0, 1.1, -0.2, 1.1, 0.0]])
    with pytest.raises(AdmissibilityError, match="Classical"):
        hybrid_factorized(GaussianTomogram(vacuum), negative)
    with pytest.raises(AdmissibilityError, match="Quantum tomogram is negative"):
        hybrid_factorized(negative, GaussianTomogram(vacuum))


def test_unnormalized_part_refused(vacuum):
    heavy = SampledTomogram([(1.0, 0.0)], -1.0, 1.0, [[0.0, 2.0, 0.0, 2.0, 0.0]])
    with pytest.raises(NormalizationError) as err:
        hybrid_factorized(GaussianTomogram(vacuum), heavy)
    assert err.value.integral == pytest.approx(2.0)


def test_hybrid_validation(vacuum):
    with pytest.raises(DomainError):
        hybrid_factorized(GaussianTomogram(vacuum), GaussianTomogram(vacuum), hbar=0.0)
    with pytest.raises(DomainError):
        hybrid_factorized(GaussianTomogram(GaussianState.vacuum(n_modes=2)), GaussianTomogram(vacuum))
