import math

import numpy as np
import pytest

from tomokit.admissibility.classify import (QUADRANTS, classify_state, fock_wigner_minimum, gaussian_spectrum,
                                            natural_units, quadrant_of)
from tomokit.admissibility.reports import classical_witness, quantum_witness
from tomokit.errors import DomainError, NormalizationError
from tomokit.phase_space.model import FockState, GaussianState, PhaseGrid, Window, gaussian_grid


def test_quadrants():
    assert [quadrant_of(c, q) for c, q in [(True, True), (True, False), (False, True), (False, False)]] == \
        list(QUADRANTS)


def test_gaussian_spectrum():
    np.testing.assert_allclose(gaussian_spectrum(0.5, 3), [1.0, 0.0, 0.0])
    np.testing.assert_allclose(gaussian_spectrum(0.1, 2), [5.0 / 3.0, -10.0 / 9.0])
    # thermal states stay positive and sum to one
    spectrum = gaussian_spectrum(1.5, 200)
    assert spectrum.min() > 0
    assert spectrum.sum() == pytest.approx(1.0)


def test_fock_wigner_minimum():
    assert fock_wigner_minimum(0) >= 0
    assert fock_wigner_minimum(1) == pytest.approx(-1.0 / math.pi)


def test_vacuum_is_both(vacuum):
    report = classify_state(vacuum)
    assert report.quadrant == "both"
    assert report.method == "gaussian"
    assert report.uncertainty_verdict.passes


def test_compressed_gaussian_is_classical_only(squeezed):
    report = classify_state(squeezed)
    assert report.quadrant == "classical-only"
    assert report.min_eigenvalue == pytest.approx(-10.0 / 9.0)
    assert not report.uncertainty_verdict.passes


def test_number_state_is_quantum_only():
    report = classify_state(FockState(1))
    assert report.quadrant == "quantum-only"
    assert report.method == "fock"
    assert report.min_symbol_value == pytest.approx(-1.0 / math.pi)
    assert classify_state(FockState(0)).quadrant == "both"
    # the level is rebuilt at the requested hbar
    report = classify_state(FockState(1), hbar=0.1)
    assert report.quadrant == "quantum-only"
    assert report.hbar == 0.1


def test_two_mode_gaussian_uses_per_mode_extremes():
    assert classify_state(GaussianState.vacuum(n_modes=2)).quadrant == "both"
    mixed = GaussianState([0.0] * 4, np.diag([0.1, 0.5, 0.1, 0.5]))
    report = classify_state(mixed)
    assert report.quadrant == "classical-only"
    assert report.min_eigenvalue == pytest.approx(-10.0 / 9.0)


def test_grid_route_agrees_with_closed_form(vacuum_grid, fock1_grid):
    assert classify_state(vacuum_grid, dim=16).quadrant == "both"
    report = classify_state(fock1_grid, dim=16)
    assert report.quadrant == "quantum-only"
    assert report.method == "grid"
    assert report.min_symbol_value == pytest.approx(-1.0 / math.pi, rel=1e-2)


def test_grid_route_for_classical_gaussian(squeezed):
    report = classify_state(squeezed, analytic=False)
    assert report.quadrant == "classical-only"
    assert report.min_eigenvalue == pytest.approx(-10.0 / 9.0, abs=1e-4)


def test_scaled_number_state_is_neither():
    fock = FockState(1)
    g = PhaseGrid.from_function(lambda Q, P: 9.0 * fock.wigner(3.0 * Q, 3.0 * P), Window.default(), kind="wigner")
    report = classify_state(g)
    assert report.quadrant == "neither"
    assert report.min_eigenvalue < -0.5


def test_grid_route_at_small_hbar():
    hbar = 0.1
    state = GaussianState.isotropic(hbar / (2.0 * math.sqrt(2.0)))
    closed = classify_state(state, hbar=hbar)
    sampled = classify_state(state, hbar=hbar, analytic=False)
    assert closed.quadrant == sampled.quadrant == "classical-only"
    assert closed.min_eigenvalue == pytest.approx(-0.20101, abs=1e-4)
    assert sampled.min_eigenvalue == pytest.approx(closed.min_eigenvalue, abs=1e-3)


def test_natural_units_keep_mass(vacuum_grid):
    moved = natural_units(vacuum_grid, 0.25)
    assert moved.q_max == pytest.approx(16.0)
    assert moved.mass() == pytest.approx(vacuum_grid.mass())
    assert natural_units(vacuum_grid, 1.0) is vacuum_grid


def test_classify_validation(vacuum, vacuum_grid):
    with pytest.raises(DomainError):
        classify_state(vacuum, hbar=0.0)
    with pytest.raises(DomainError):
        classify_state(vacuum_grid.with_values(vacuum_grid.values, kind="symbol"))
    with pytest.raises(DomainError):
        classify_state("vacuum")


def test_report_as_dict(vacuum):
    d = classify_state(gaussian_grid(vacuum, Window.default()), dim=16).as_dict()
    assert d["quadrant"] == "both"
    assert set(d["uncertainty"]) >= {"passes", "sr_margin", "r"}
    assert d["warnings"] == []


def test_number_state_spectrum_comes_from_the_quantizer():
    report = classify_state(FockState(2), dim=16)
    assert report.dim == 16
    assert abs(report.min_eigenvalue) < 1e-9
    assert report.leakage < 1e-6


@pytest.mark.parametrize("hbar", [1.0, 0.1, 0.01])
def test_witnesses_agree_with_sampled_route(hbar):
    for state in (classical_witness(hbar), quantum_witness(hbar)):
        closed = classify_state(state, hbar, dim=32)
        sampled = classify_state(state, hbar, dim=32, analytic=False)
        assert closed.quadrant == sampled.quadrant
        assert sampled.min_eigenvalue == pytest.approx(closed.min_eigenvalue, abs=1e-3)


def test_sampled_route_uses_the_given_window(vacuum):
    report = classify_state(vacuum, analytic=False, dim=16, window=Window.square(6.0, 129))
    assert report.quadrant == "both"
    with pytest.raises(NormalizationError):
        classify_state(vacuum, analytic=False, dim=16, window=Window.square(1.0, 33))
