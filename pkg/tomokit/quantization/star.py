"""Noncommutative (Moyal) and commutative star products"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import comb, erfc

from ..config import DEFAULT_DIM, EDGE_FRACTION, MAX_DIM, STAR_SERIES_ORDER
from ..errors import DomainError
from ..phase_space.model import PhaseGrid
from ..phase_space.symmetry import sample_at
from ..utils.logging import log
from .basis import check_dim
from .weyl import (OperatorMatrix, PositionKernel, matrix_to_symbol, polynomial_coefficients, position_kernel,
                   symbol_to_matrix, weyl_values)

STAR_METHODS = ("auto", "matrix", "series")
# Padding levels span this many taper widths
TAPER_WIDTHS = 10.0


@dataclass(frozen=True)
class KernelSpec:
    """Which star-product kernel to evaluate and with what discretization"""

    kind: str = "moyal"
    dim: int = DEFAULT_DIM
    series_order: int = STAR_SERIES_ORDER

    def __post_init__(self):
        if self.kind not in ("moyal", "classical"):
            raise DomainError(f"Unknown kernel kind '{self.kind}'")

    def evaluate(self, a, b, points):
        """Product symbol at sample points, from the explicit kernel"""
        if self.kind == "moyal":
            return star_kernel_at(a, b, points)
        _same_window(a, b)
        points = np.atleast_2d(points)
        product = a.with_values(weyl_values(a) * weyl_values(b), kind="symbol")
        return sample_at(product, points[:, 0], points[:, 1])


def _same_window(a, b):
    if not a.window.same_as(b.window):
        raise DomainError("Star products need both symbols on the same window")


def moyal_kernel(q1, p1, q2, p2, q, p):
    """K = (1/pi^2) exp{2i[q1(p2 - p) + q2(p - p1) + q(p1 - p2)]}"""
    return np.exp(2j * (q1 * (p2 - p) + q2 * (p - p1) + q * (p1 - p2))) / math.pi ** 2


def star_kernel_at(a, b, points):
    """
    Evaluate the Moyal kernel integral at sample points by separable quadrature

    The four-fold integral factorizes into M = A' E2 B' contracted with E1,
    where E1 = exp(2i q1 p2) and E2 = exp(-2i p1 q2).

    Args:
        a: PhaseGrid symbol A(q1, p1)
        b: PhaseGrid symbol B(q2, p2) on the same window
        points: Array of (q, p) pairs

    Returns:
        Complex array of (A * B)(q, p)
    """
    _same_window(a, b)
    q, p = a.q, a.p
    weights = a.weights()
    wa = weyl_values(a) * weights
    wb = weyl_values(b) * weights
    e1 = np.exp(2j * np.outer(q, p))
    e2 = np.exp(-2j * np.outer(p, q))

    out = []
    for q0, p0 in np.atleast_2d(points):
        at = wa * np.exp(2j * (q0 * p[None, :] - p0 * q[:, None]))
        bt = wb * np.exp(2j * (p0 * q[:, None] - q0 * p[None, :]))
        out.append(np.sum((at @ e2 @ bt) * e1) / math.pi ** 2)
    return np.array(out)


def _edge_fraction(g):
    values = np.abs(g.values)
    peak = values.max()
    if peak == 0:
        return 0.0
    edge = max(values[0].max(), values[-1].max(), values[:, 0].max(), values[:, -1].max())
    return float(edge / peak)


def _derivative_table(values, hq, hp, order):
    table = {(0, 0): values}
    for i in range(1, order + 1):
        table[(i, 0)] = np.gradient(table[(i - 1, 0)], hq, axis=0, edge_order=2)
    for i in range(order + 1):
        for j in range(1, order - i + 1):
            table[(i, j)] = np.gradient(table[(i, j - 1)], hp, axis=1, edge_order=2)
    return table


def moyal_series(a, b, order=STAR_SERIES_ORDER):
    """
    Moyal bracket expansion with finite-difference derivatives

    sum_k (i/2)^k / k! sum_j (-1)^j C(k, j) d_q^(k-j) d_p^j A * d_p^(k-j) d_q^j B,
    exact for symbols of degree two or less in each variable.
    """
    _same_window(a, b)
    window = a.window
    da = _derivative_table(weyl_values(a).astype(complex), window.hq, window.hp, order)
    db = _derivative_table(weyl_values(b).astype(complex), window.hq, window.hp, order)
    result = np.zeros(a.values.shape, dtype=complex)
    for k in range(order + 1):
        factor = (0.5j) ** k / math.factorial(k)
        for j in range(k + 1):
            result += factor * (-1) ** j * comb(k, j, exact=True) * da[(k - j, j)] * db[(j, k - j)]
    return a.with_values(result, kind="symbol")


def level_taper(work, keep):
    """
    Level weights near 1 below keep that fall smoothly to zero before work

    A hard cut at keep leaves the symbol of the kept projector oscillating
    between 0 and 2 at the origin; an erfc roll-off over the padding levels
    reads back as 1 across the window.
    """
    n = np.arange(work)
    if work <= keep:
        return np.ones(work)
    center = 0.5 * (keep + work)
    width = (work - keep) / TAPER_WIDTHS
    return 0.5 * erfc((n - center) / (math.sqrt(2.0) * width))


def _decays(g):
    return _edge_fraction(g) <= EDGE_FRACTION


def star_moyal(a, b, dim=DEFAULT_DIM, method="auto", order=STAR_SERIES_ORDER):
    """
    Noncommutative star product of two symbols

    Args:
        a: PhaseGrid symbol
        b: PhaseGrid symbol on the same window
        dim: Basis levels kept exactly on the matrix route
        method: 'matrix' (quantize and multiply on a padded basis, taper the
            padding levels, dequantize), 'series' (bracket expansion) or
            'auto' (matrix unless a symbol neither decays at the window edge
            nor is a polynomial)
        order: Series order

    Returns:
        PhaseGrid of kind 'symbol'
    """
    _same_window(a, b)
    if method not in STAR_METHODS:
        raise DomainError(f"Unknown star-product method '{method}', expected one of {STAR_METHODS}")
    if method == "auto":
        exact = all(_decays(g) or polynomial_coefficients(g) is not None for g in (a, b))
        method = "matrix" if exact else "series"
        log.debug(f"star_moyal: using {method} route")
    if method == "series":
        return moyal_series(a, b, order)

    dim = check_dim(dim)
    work = min(2 * dim, MAX_DIM)
    if work <= dim:
        log.warning(f"star_moyal: no room to pad dim {dim} under the basis limit {MAX_DIM}")
    product = symbol_to_matrix(a, work) @ symbol_to_matrix(b, work)
    taper = level_taper(work, dim)
    tapered = OperatorMatrix(taper[:, None] * product.entries * taper[None, :])
    return matrix_to_symbol(tapered, a.window, kind="symbol")


def star_classical_kernel(ka, kb):
    """
    Commutative kernel product in the position representation

    At each midpoint Q the kernel of the pointwise product of symbols is the
    convolution over offsets: c(Q, u) = int a(Q, u') b(Q, u - u') du'.
    """
    if not ka.window.same_as(kb.window) or len(ka.u) != len(kb.u) or not np.allclose(ka.u, kb.u):
        raise DomainError("Classical star product needs kernels on the same midpoint and offset axes")
    du = ka.u[1] - ka.u[0]
    values = fftconvolve(ka.values, kb.values, mode="same", axes=1) * du
    return PositionKernel(ka.window, ka.u, values)


def star_classical(a, b, dim=DEFAULT_DIM, window=None):
    """
    Commutative star product: the operator whose Weyl symbol is A(q, p) * B(q, p)

    Args:
        a: PhaseGrid symbol, OperatorMatrix or PositionKernel
        b: Same type as a
        dim: Basis truncation for grid and matrix inputs
        window: Window used to read symbols off matrix inputs

    Returns:
        OperatorMatrix for grid and matrix inputs, PositionKernel for kernel inputs
    """
    if isinstance(a, PositionKernel) and isinstance(b, PositionKernel):
        return star_classical_kernel(a, b)
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        a = matrix_to_symbol(a, window)
        b = matrix_to_symbol(b, window)
    if not (isinstance(a, PhaseGrid) and isinstance(b, PhaseGrid)):
        raise DomainError("star_classical operands must both be grids, matrices or position kernels")
    _same_window(a, b)
    product = a.with_values(weyl_values(a) * weyl_values(b), kind="symbol")
    return symbol_to_matrix(product, check_dim(dim))


def kernel_symbol(kernel):
    """Weyl symbol W(q, p) = sum_k du a(q, u_k) exp(-i p u_k) read back from a position kernel"""
    du = kernel.u[1] - kernel.u[0]
    values = du * kernel.values @ np.exp(-1j * np.outer(kernel.u, kernel.window.p))
    return PhaseGrid(kernel.window.q_min, kernel.window.q_max, kernel.window.p_min, kernel.window.p_max,
                     values, kind="symbol")
