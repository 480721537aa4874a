"""Oscillator (Hermite-function) basis for tomokit"""

import numpy as np
from scipy.special import comb

from ..config import MAX_DIM
from ..errors import DomainError


def check_dim(dim, limit=MAX_DIM):
    if int(dim) != dim or dim < 1:
        raise DomainError(f"Basis dimension must be a positive integer, got {dim}")
    if dim > limit:
        raise DomainError(f"Basis dimension {dim} exceeds the configured maximum {limit} (TOMOKIT_MAX_DIM)")
    return int(dim)


def hermite_functions(dim, x):
    """
    Normalized Hermite functions psi_0 .. psi_{dim-1} by the stable three-term recurrence

    Args:
        dim: Number of levels
        x: Sample points

    Returns:
        Array of shape (dim, len(x))
    """
    x = np.asarray(x, dtype=float)
    psi = np.empty((dim,) + x.shape)
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if dim > 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, dim - 1):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def turning_point(dim):
    """Classical turning point of the highest retained level"""
    return np.sqrt(2.0 * dim + 1.0)


def position_matrix(dim):
    """Matrix of q = x: <m|q|m+1> = sqrt((m+1)/2)"""
    off = np.sqrt(np.arange(1, dim) / 2.0)
    return (np.diag(off, 1) + np.diag(off, -1)).astype(complex)


def momentum_matrix(dim):
    """Matrix of p = -i d/dx: <m|p|m+1> = -i sqrt((m+1)/2)"""
    off = np.sqrt(np.arange(1, dim) / 2.0)
    return -1j * np.diag(off, 1) + 1j * np.diag(off, -1)


def weyl_ordered_matrix(coefficients, dim):
    """
    Weyl quantization of a polynomial sum c_ab q^a p^b

    q^a p^b maps to 2^-a sum_k C(a, k) Q^(a-k) P^b Q^k. The ladder matrices are
    built large enough that every product is exact on the kept block.

    Args:
        coefficients: Mapping (a, b) -> c_ab
        dim: Basis truncation

    Returns:
        Complex matrix of shape (dim, dim)
    """
    degree = max((a + b for a, b in coefficients), default=0)
    size = dim + degree + 1
    q, p = position_matrix(size), momentum_matrix(size)
    entries = np.zeros((size, size), dtype=complex)
    for (a, b), c in coefficients.items():
        pb = np.linalg.matrix_power(p, b)
        for k in range(a + 1):
            term = np.linalg.matrix_power(q, a - k) @ pb @ np.linalg.matrix_power(q, k)
            entries += c * comb(a, k, exact=True) / 2 ** a * term
    return entries[:dim, :dim]


def wavefunction(coefficients):
    """
    Build psi(x) = sum_n c_n psi_n(x) from Hermite-basis coefficients

    Returns:
        Callable evaluating the wave function at an array of points
    """
    coefficients = np.asarray(coefficients)

    def psi(x):
        basis = hermite_functions(len(coefficients), np.ravel(x))
        return (coefficients @ basis).reshape(np.shape(x))

    return psi
