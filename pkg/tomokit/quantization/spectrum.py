"""Spectral decomposition of quantized states"""

from dataclasses import dataclass

import numpy as np

from ..config import HERMITICITY_TOL
from ..errors import HermiticityError
from .basis import wavefunction


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues ordered by decreasing magnitude; vectors are the matching columns"""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def trace(self):
        return float(self.eigenvalues.sum())

    @property
    def min_eigenvalue(self):
        return float(self.eigenvalues.min())

    @property
    def negative_weight(self):
        """Total weight carried by negative eigenvalues (the negative probabilities)"""
        return float(self.eigenvalues[self.eigenvalues < 0].sum())

    def reassemble(self):
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T

    def eigenfunction(self, j):
        """Wave function of the j-th eigenvector"""
        return wavefunction(self.vectors[:, j])


def spectral_decompose(a):
    """
    Eigendecomposition of a Hermitian operator matrix

    Args:
        a: OperatorMatrix

    Returns:
        Spectrum with real eigenvalues sorted by decreasing absolute value
    """
    residual = a.hermitian_residual()
    if residual > HERMITICITY_TOL * max(1.0, float(np.max(np.abs(a.entries)))):
        raise HermiticityError(f"Cannot decompose a non-Hermitian matrix (residual {residual:.3e})",
                               residual=residual)
    eigenvalues, vectors = np.linalg.eigh(a.entries)
    order = np.argsort(-np.abs(eigenvalues), kind="stable")
    return Spectrum(eigenvalues[order], vectors[:, order])
