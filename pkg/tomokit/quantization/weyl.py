"""Weyl symbol and operator-matrix maps in the oscillator basis"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ..config import (ANALYTIC_TOL, BASIS_MARGIN, DEFAULT_DIM, HERMITICITY_TOL, LEAKAGE_TOL, POLYNOMIAL_DEGREE,
                      POLYNOMIAL_FIT_TOL, SYMBOL_LEAKAGE_TOL, projection_chunk_rows)
from ..errors import DomainError, HermiticityError
from ..phase_space.model import PhaseGrid, Window
from ..utils.logging import log
from .basis import check_dim, hermite_functions, turning_point, weyl_ordered_matrix

# Offsets stay this far inside the momentum Nyquist limit of the symbol grid
NYQUIST_FRACTION = 0.95


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Operator in the truncated Hermite-function basis"""

    entries: np.ndarray
    hermitian: bool = False
    leakage: float = 0.0
    warnings: tuple = ()

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"Operator matrix must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        if self.hermitian:
            residual = self.hermitian_residual()
            if residual > 1e-12 * max(1.0, float(np.max(np.abs(entries)))):
                raise HermiticityError(f"Matrix flagged Hermitian deviates by {residual:.3e}", residual=residual)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def trace(self):
        return complex(np.trace(self.entries))

    def hermitian_residual(self):
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def truncated(self, dim):
        return OperatorMatrix(self.entries[:dim, :dim], self.hermitian, self.leakage, self.warnings)

    def __matmul__(self, other):
        return OperatorMatrix(self.entries @ other.entries)


@dataclass(frozen=True, eq=False)
class PositionKernel:
    """Position representation a(Q, u) = A(Q + u/2, Q - u/2) on midpoint and offset axes"""

    window: Window
    u: np.ndarray
    values: np.ndarray

    @property
    def q(self):
        return self.window.q

    @property
    def half(self):
        return (len(self.u) - 1) // 2


def weyl_values(g):
    """Weyl symbol carried by a grid: 2*pi*f for densities, W or A as stored otherwise"""
    if g.kind == "density":
        return 2.0 * math.pi * g.values
    return g.values


def offset_axis(h, u_max):
    half = max(1, int(math.ceil(u_max / h)))
    return h * np.arange(-half, half + 1), half


def position_kernel(g, u_max=None):
    """
    Fourier transform of the symbol in momentum at every midpoint row

    a(Q, u) = (1/2pi) sum_j w_j W(Q, p_j) exp(i p_j u)

    Args:
        g: PhaseGrid (density, wigner or symbol)
        u_max: Largest offset (default: just inside the momentum Nyquist limit)

    Returns:
        PositionKernel with offsets spaced like the q grid
    """
    window = g.window
    u_max = u_max or NYQUIST_FRACTION * math.pi / window.hp
    u, _ = offset_axis(window.hq, u_max)
    wp = np.full(window.n_p, window.hp)
    wp[[0, -1]] *= 0.5
    transform = np.exp(1j * np.outer(window.p, u)) / (2.0 * math.pi)
    values = (weyl_values(g) * wp) @ transform
    return PositionKernel(window, u, values)


def _lattice(window, half, dim):
    # z_l = q_min + (l - half) h/2 holds every Q_i +- u_k/2
    n = 2 * (window.n_q - 1) + 2 * half + 1
    z = window.q_min + (np.arange(n) - half) * window.hq / 2.0
    return hermite_functions(dim, z)


def _indices(rows, half, n_u):
    ks = np.arange(n_u)
    plus = 2 * rows[:, None] + ks[None, :]
    minus = 2 * rows[:, None] - ks[None, :] + 2 * half
    return plus.ravel(), minus.ravel()


def project(kernel, dim):
    """
    Double projection A_mn = sum_i w_i sum_k h a(Q_i, u_k) psi_m(Q_i + u_k/2) psi_n(Q_i - u_k/2)

    Rows are processed in memory-bounded chunks.
    """
    window = kernel.window
    half, n_u = kernel.half, len(kernel.u)
    psi = _lattice(window, half, dim)
    wq = np.full(window.n_q, window.hq)
    wq[[0, -1]] *= 0.5
    coeffs = kernel.values * (wq * window.hq)[:, None]

    rows = np.flatnonzero(np.any(coeffs != 0, axis=1))
    entries = np.zeros((dim, dim), dtype=complex)
    if rows.size == 0:
        return entries
    chunk = projection_chunk_rows(dim, n_u, rows.size)
    for start in range(0, rows.size, chunk):
        block = rows[start:start + chunk]
        plus, minus = _indices(block, half, n_u)
        entries += (psi[:, plus] * coeffs[block].ravel()) @ psi[:, minus].T
    return entries


def polynomial_coefficients(g, degree=POLYNOMIAL_DEGREE, tol=POLYNOMIAL_FIT_TOL):
    """
    Read a symbol grid as a polynomial sum c_ab q^a p^b with a + b <= degree

    Returns:
        Mapping (a, b) -> c_ab, or None when the least-squares fit leaves a
        residual above tol relative to the largest sample
    """
    window = g.window
    sq = max(abs(window.q_min), abs(window.q_max))
    sp = max(abs(window.p_min), abs(window.p_max))
    Q, P = window.mesh()
    powers = [(a, b) for a in range(degree + 1) for b in range(degree + 1 - a)]
    design = np.stack([((Q / sq) ** a * (P / sp) ** b).ravel() for a, b in powers], axis=1)
    values = g.values.ravel()
    fit, *_ = np.linalg.lstsq(design, values, rcond=None)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.max(np.abs(design @ fit - values)) > tol * scale:
        return None
    return {(a, b): c / (sq ** a * sp ** b) for (a, b), c in zip(powers, fit) if abs(c) > tol * scale}


def reassembly_error(g, entries):
    """Relative L1 distance between a symbol grid and the symbol read back from its matrix"""
    scale = float(np.sum(g.weights() * np.abs(g.values)))
    if scale == 0.0:
        return 0.0
    back = matrix_to_symbol(OperatorMatrix(entries), g.window)
    return float(np.sum(g.weights() * np.abs(back.values - g.values)) / scale)


def symbol_to_matrix(g, dim=DEFAULT_DIM):
    """
    Weyl quantization of a phase-space grid

    Densities enter as W = 2*pi*f so a normalized density has unit trace.
    Symbol grids that are exact low-degree polynomials (q, p, q*p, ...) are
    quantized through the ladder matrices, which is exact at any dim; every
    other grid goes through the position kernel and is therefore taken to
    vanish outside its window.

    Args:
        g: PhaseGrid (density, wigner or symbol)
        dim: Basis truncation

    Returns:
        OperatorMatrix; Hermitian (exactly) for real symbols. leakage is the
        trace deficit for states and the relative L1 error of the read-back
        symbol for other grids.
    """
    dim = check_dim(dim)
    hermitian = not np.iscomplexobj(g.values)
    if g.kind == "symbol":
        coefficients = polynomial_coefficients(g)
        if coefficients is not None:
            log.debug(f"Quantizing degree-{max((a + b for a, b in coefficients), default=0)} "
                      f"polynomial symbol at dim {dim}")
            entries = weyl_ordered_matrix(coefficients, dim)
            if hermitian:
                entries = 0.5 * (entries + entries.conj().T)
            return OperatorMatrix(entries, hermitian=hermitian)

    window = g.window
    x_cut = turning_point(dim) + BASIS_MARGIN
    u_max = min(2.0 * x_cut, NYQUIST_FRACTION * math.pi / window.hp)
    kernel = position_kernel(g, u_max)
    log.debug(f"Quantizing {g.n_q}x{g.n_p} {g.kind} grid at dim {dim} ({len(kernel.u)} offsets)")
    entries = project(kernel, dim)
    if hermitian:
        entries = 0.5 * (entries + entries.conj().T)

    if g.kind == "symbol":
        leakage, limit = reassembly_error(g, entries), SYMBOL_LEAKAGE_TOL
    else:
        leakage, limit = abs(g.mass() - float(np.trace(entries).real)), LEAKAGE_TOL
    warnings = ()
    if leakage > limit:
        message = f"truncation leakage {leakage:.3e} at dim {dim}"
        log.warning(f"symbol_to_matrix: {message}")
        warnings = (message,)
    return OperatorMatrix(entries, hermitian=hermitian, leakage=leakage, warnings=warnings)


def matrix_to_symbol(a, window=None, kind="symbol"):
    """
    Weyl symbol W(q, p) = sum_k h K(q, u_k) exp(-i p u_k) of an operator matrix

    Args:
        a: OperatorMatrix
        window: Output Window (default window if None)
        kind: 'symbol', or 'wigner' for density matrices

    Returns:
        PhaseGrid, real-valued when the matrix is Hermitian
    """
    window = window or Window.default()
    dim = a.dim
    u, half = offset_axis(window.hq, 2.0 * (turning_point(dim) + BASIS_MARGIN))
    n_u = len(u)
    psi = _lattice(window, half, dim)

    kernel = np.empty((window.n_q, n_u), dtype=complex)
    rows = np.arange(window.n_q)
    chunk = projection_chunk_rows(dim, n_u, window.n_q, bytes_per_value=16)
    for start in range(0, window.n_q, chunk):
        block = rows[start:start + chunk]
        plus, minus = _indices(block, half, n_u)
        kernel[block] = np.einsum("mk,mk->k", psi[:, plus], a.entries @ psi[:, minus]).reshape(len(block), n_u)

    values = window.hq * kernel @ np.exp(-1j * np.outer(u, window.p))
    if a.hermitian or a.hermitian_residual() <= HERMITICITY_TOL:
        values = values.real
    g = PhaseGrid(window.q_min, window.q_max, window.p_min, window.p_max, values, kind=kind, tol=ANALYTIC_TOL)

    if kind == "wigner":
        deficit = abs(g.mass() - a.trace.real)
        if deficit > LEAKAGE_TOL:
            log.warning(f"matrix_to_symbol: window keeps {g.mass():.6f} of trace {a.trace.real:.6f}")
    return g


def wigner_of_density(rho, x, p=None, tol=ANALYTIC_TOL):
    """
    Wigner function W(q, p) = int rho(q + u/2, q - u/2) exp(-i p u) du of a sampled kernel

    Args:
        rho: Matrix rho(x_a, x_b) on a symmetric uniform grid
        x: Position grid
        p: Momentum grid (default: same as x)
        tol: Normalization tolerance declared on the result

    Returns:
        PhaseGrid of kind 'wigner' with q on the x grid
    """
    rho = np.asarray(rho)
    x = np.asarray(x, dtype=float)
    n = len(x)
    if rho.shape != (n, n):
        raise DomainError(f"Kernel shape {rho.shape} does not match {n} grid points")
    if abs(x[0] + x[-1]) > 1e-12 * abs(x[-1]):
        raise DomainError("Kernel grid must be symmetric about the origin")
    residual = float(np.max(np.abs(rho - rho.conj().T)))
    if residual > HERMITICITY_TOL * max(1.0, float(np.max(np.abs(rho)))):
        raise HermiticityError(f"Kernel deviates from Hermitian by {residual:.3e}", residual=residual)

    p = x if p is None else np.asarray(p, dtype=float)
    h = x[1] - x[0]
    # q_i +- u/2 on the grid forces u = 2 m h
    m = np.arange(-(n - 1), n)
    i = np.arange(n)[:, None]
    plus, minus = i + m[None, :], i - m[None, :]
    valid = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    samples = np.where(valid, rho[np.clip(plus, 0, n - 1), np.clip(minus, 0, n - 1)], 0.0)
    values = 2.0 * h * samples @ np.exp(-2j * h * np.outer(m, p))
    return PhaseGrid(x[0], x[-1], p[0], p[-1], values.real, kind="wigner", tol=tol)


def _as_callable(psi, x):
    if callable(psi):
        return psi
    if x is None:
        raise DomainError("Sampled wave functions need their x grid")
    x = np.asarray(x, dtype=float)
    spline = CubicSpline(x, np.asarray(psi, dtype=complex))

    def evaluate(z):
        inside = (z >= x[0]) & (z <= x[-1])
        return np.where(inside, spline(np.clip(z, x[0], x[-1])), 0.0)

    return evaluate


def positivity_functional(w, psi, x=None):
    """
    Quadratic form int psi*(x) W((x+x')/2, p) exp(ip(x-x')) psi(x') dp dx dx'

    Equals 2*pi <psi|A|psi> for the quantized symbol; nonnegative for every psi
    exactly when the operator is positive semidefinite.

    Args:
        w: PhaseGrid (density grids enter as 2*pi*f)
        psi: Callable wave function, or samples on x
        x: Sample points when psi is an array

    Returns:
        Real value of the form
    """
    psi = _as_callable(psi, x)
    kernel = position_kernel(w)
    window = kernel.window
    half, n_u = kernel.half, len(kernel.u)
    n = 2 * (window.n_q - 1) + 2 * half + 1
    z = window.q_min + (np.arange(n) - half) * window.hq / 2.0
    values = np.asarray(psi(z), dtype=complex)

    wq = np.full(window.n_q, window.hq)
    wq[[0, -1]] *= 0.5
    plus, minus = _indices(np.arange(window.n_q), half, n_u)
    terms = (kernel.values * (wq * window.hq)[:, None]).ravel() * values[plus].conj() * values[minus]
    return float(2.0 * math.pi * terms.sum().real)
