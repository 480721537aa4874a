"""Factorized hybrid quantum-classical states"""

from dataclasses import dataclass

import numpy as np

from ..config import ANALYTIC_TOL
from ..errors import AdmissibilityError, DomainError, NormalizationError
from ..phase_space.uncertainty import check
from ..tomography.analysis import check_tomogram, tomogram_moments
from ..tomography.tomogram import Tomogram, as_frame, trapezoid_weights
from ..utils.logging import log

# Quadrature nodes used to integrate out one of the two variables
MARGINAL_NODES = 4097


def _integrate(t, frame, n_x=MARGINAL_NODES):
    lo, hi = t.x_window(frame)
    x = np.linspace(lo, hi, n_x)
    return float(np.sum(trapezoid_weights(n_x, x[1] - x[0]) * t.pdf(x, frame)))


@dataclass(frozen=True, eq=False)
class HybridState:
    """
    Product tomogram omega(X1, X2) = omega_q(X1, F1) * omega_cl(X2, F2)

    The quantum part obeys the uncertainty relation; the classical part only
    has to be a probability density.
    """

    quantum_part: Tomogram
    classical_part: Tomogram
    hbar: float = 1.0

    def pdf(self, x1, x2, frame_q, frame_cl):
        """Combined tomogram on the outer grid x1 x x2"""
        left = np.atleast_1d(self.quantum_part.pdf(np.asarray(x1, dtype=float), as_frame(frame_q)))
        right = np.atleast_1d(self.classical_part.pdf(np.asarray(x2, dtype=float), as_frame(frame_cl)))
        return np.multiply.outer(left, right)

    def marginal_quantum(self, x1, frame_q, frame_cl):
        """Integrate the classical variable out of the combined tomogram"""
        return self.quantum_part.pdf(np.asarray(x1, dtype=float), as_frame(frame_q)) * \
            _integrate(self.classical_part, as_frame(frame_cl))

    def marginal_classical(self, x2, frame_q, frame_cl):
        return self.classical_part.pdf(np.asarray(x2, dtype=float), as_frame(frame_cl)) * \
            _integrate(self.quantum_part, as_frame(frame_q))

    def normalization(self, frame_q, frame_cl):
        return _integrate(self.quantum_part, as_frame(frame_q)) * _integrate(self.classical_part, as_frame(frame_cl))


def _require_normalized(t, name, tol):
    findings = check_tomogram(t, tol=tol)
    residual = findings.max_normalization_residual
    if residual > tol:
        raise NormalizationError(f"{name} tomogram is off normalization by {residual:.3e}",
                                 integral=1.0 + residual)
    return findings


def hybrid_factorized(q_tomo, cl_tomo, hbar=1.0, tol=ANALYTIC_TOL):
    """
    Combine a quantum and a classical tomogram into a factorized hybrid state

    Args:
        q_tomo: Single-mode tomogram for the quantum subsystem
        cl_tomo: Single-mode tomogram for the classical subsystem
        hbar: Planck parameter of the quantum subsystem
        tol: Normalization tolerance

    Returns:
        HybridState

    Raises:
        NormalizationError: Either tomogram is not normalized
        AdmissibilityError: Either tomogram takes negative values, or the quantum
            part violates the uncertainty relation
    """
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    for t in (q_tomo, cl_tomo):
        if t.n_modes != 1:
            raise DomainError("Hybrid states combine single-mode tomograms")

    for t, name in ((q_tomo, "Quantum"), (cl_tomo, "Classical")):
        findings = _require_normalized(t, name, tol)
        if findings.negative_values:
            raise AdmissibilityError(f"{name} tomogram is negative: {findings.negative_values[0]}")

    verdict = check(tomogram_moments(q_tomo), hbar)
    if not verdict.passes:
        raise AdmissibilityError(f"Quantum slot violates the uncertainty relation at hbar={hbar} "
                                 f"(margin {verdict.sr_margin:.3e})")

    log.debug(f"Hybrid state built: quantum margin {verdict.sr_margin:.3e}")
    return HybridState(q_tomo, cl_tomo, float(hbar))
