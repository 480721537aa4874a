"""Classical and quantum admissibility of states"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_DIM, NEGATIVE_FLOOR, POSITIVITY_TOL, QUANTUM_EIGENVALUE_TOL
from ..errors import DomainError
from ..phase_space.model import FockState, GaussianState, PhaseGrid, Window, gaussian_grid
from ..phase_space.symmetry import moments_of_grid
from ..phase_space.uncertainty import check, symplectic_eigenvalues
from ..quantization.spectrum import spectral_decompose
from ..quantization.weyl import symbol_to_matrix
from ..utils.logging import log

QUADRANTS = ("both", "classical-only", "quantum-only", "neither")


@dataclass(frozen=True)
class AdmissibilityReport:
    """
    Joint verdict on a state; symbol and eigenvalue evidence are in hbar = 1 natural units

    min_symbol_value uses the density convention f = W / 2pi.
    """

    classical_admissible: bool
    quantum_admissible: bool
    uncertainty_verdict: object
    min_symbol_value: float
    min_eigenvalue: float
    quadrant: str
    hbar: float
    method: str = "grid"
    dim: int = 0
    leakage: float = 0.0
    warnings: tuple = ()

    def as_dict(self):
        return {
            "quadrant": self.quadrant,
            "classical_admissible": self.classical_admissible,
            "quantum_admissible": self.quantum_admissible,
            "min_symbol_value": self.min_symbol_value,
            "min_eigenvalue": self.min_eigenvalue,
            "hbar": self.hbar,
            "method": self.method,
            "dim": self.dim,
            "leakage": self.leakage,
            "uncertainty": self.uncertainty_verdict.as_dict(),
            "warnings": list(self.warnings),
        }


def quadrant_of(classical, quantum):
    if classical and quantum:
        return "both"
    if classical:
        return "classical-only"
    if quantum:
        return "quantum-only"
    return "neither"


def gaussian_spectrum(s, levels):
    """Eigenvalues (2/(2s+1)) ((2s-1)/(2s+1))^n of a quantized isotropic Gaussian, s in hbar units"""
    n = np.arange(levels)
    return 2.0 / (2.0 * s + 1.0) * ((2.0 * s - 1.0) / (2.0 * s + 1.0)) ** n


def fock_wigner_minimum(n, samples=20001):
    """Minimum of the natural-units Wigner function of |n>, density convention"""
    r2 = np.linspace(0.0, 4.0 * n + 40.0, samples)
    w = 2.0 * (-1) ** n * np.exp(-r2) * np.polynomial.laguerre.lagval(2.0 * r2, [0] * n + [1])
    return float(w.min() / (2.0 * math.pi))


def _classify_gaussian(state, hbar, dim, tol):
    verdict = check(state.moments(), hbar)
    spectra = [gaussian_spectrum(s, dim) for s in symplectic_eigenvalues(state.sigma) / hbar]
    # products over modes reach their minimum at per-mode extremes
    candidates = [(sp.min(), sp.max()) for sp in spectra]
    min_eigenvalue = float(min(np.prod(choice) for choice in itertools.product(*candidates)))
    quantum = min_eigenvalue >= -tol
    return AdmissibilityReport(True, quantum, verdict, 0.0, min_eigenvalue, quadrant_of(True, quantum),
                               float(hbar), method="gaussian", dim=dim)


def _classify_fock(state, hbar, dim, tol, window):
    verdict = check(state.moments(), hbar)
    min_symbol = fock_wigner_minimum(state.n)
    peak = 2.0 / (2.0 * math.pi)
    classical = min_symbol >= -NEGATIVE_FLOOR * peak
    # in natural units every level is |n> at hbar = 1
    operator = symbol_to_matrix(FockState(state.n).wigner_grid(window), dim)
    spectrum = spectral_decompose(operator)
    quantum = spectrum.min_eigenvalue >= -tol
    return AdmissibilityReport(classical, quantum, verdict, min_symbol, spectrum.min_eigenvalue,
                               quadrant_of(classical, quantum), float(hbar), method="fock", dim=dim,
                               leakage=operator.leakage, warnings=operator.warnings)


def natural_units(g, hbar):
    """Rescale q -> q/sqrt(hbar), p -> p/sqrt(hbar), keeping the integral"""
    if hbar == 1.0:
        return g
    root = math.sqrt(hbar)
    return PhaseGrid(g.q_min / root, g.q_max / root, g.p_min / root, g.p_max / root,
                     g.values * hbar, kind=g.kind, tol=g.tol)


def sampling_window(window, hbar):
    """Physical-units window whose natural-units image is window"""
    root = math.sqrt(hbar)
    return Window(window.q_min * root, window.q_max * root, window.p_min * root, window.p_max * root,
                  window.n_q, window.n_p)


def _classify_grid(g, hbar, dim, tol):
    if g.kind == "symbol":
        raise DomainError("classify_state needs a density or Wigner grid")
    density = g.as_density_values()
    peak = float(density.max())
    mass = g.mass()
    classical = bool(density.min() >= -NEGATIVE_FLOOR * max(peak, 0.0) and abs(mass - 1.0) <= g.tol)

    natural = natural_units(g, hbar)
    operator = symbol_to_matrix(natural, dim)
    spectrum = spectral_decompose(operator)
    quantum = spectrum.min_eigenvalue >= -tol

    m = moments_of_grid(g)
    verdict = check(m, hbar, tol=max(POSITIVITY_TOL * (1.0 + m.t), g.tol))
    return AdmissibilityReport(classical, quantum, verdict, float(natural.as_density_values().min()),
                               spectrum.min_eigenvalue, quadrant_of(classical, quantum), float(hbar),
                               method="grid", dim=dim, leakage=operator.leakage, warnings=operator.warnings)


def classify_state(state, hbar=1.0, dim=DEFAULT_DIM, tol=QUANTUM_EIGENVALUE_TOL, analytic=True, window=None):
    """
    Classify a state as classical-only, quantum-only, both or neither

    Args:
        state: PhaseGrid, GaussianState or FockState
        hbar: Planck parameter
        dim: Basis truncation for the quantum test
        tol: Eigenvalue tolerance of the quantum test
        analytic: Use closed-form spectra for Gaussian states and the closed-form
            Wigner minimum for Fock states
        window: Natural-units window for sampling Gaussian and Fock states
            (default window if None)

    Returns:
        AdmissibilityReport
    """
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    window = window or Window.default()
    if isinstance(state, FockState):
        if state.hbar != hbar:
            state = FockState(state.n, hbar)
        if analytic:
            report = _classify_fock(state, hbar, dim, tol, window)
        else:
            report = _classify_grid(state.wigner_grid(sampling_window(window, hbar)), hbar, dim, tol)
    elif isinstance(state, GaussianState):
        if analytic or state.n_modes != 1:
            report = _classify_gaussian(state, hbar, dim, tol)
        else:
            report = _classify_grid(gaussian_grid(state, sampling_window(window, hbar)), hbar, dim, tol)
    elif isinstance(state, PhaseGrid):
        report = _classify_grid(state, hbar, dim, tol)
    else:
        raise DomainError(f"Cannot classify {type(state).__name__}")

    log.debug(f"classify_state: {report.quadrant} (min symbol {report.min_symbol_value:.4g}, "
              f"min eigenvalue {report.min_eigenvalue:.4g}, hbar {hbar})")
    return report
