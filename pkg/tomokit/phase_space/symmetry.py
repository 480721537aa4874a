"""Moment extraction and elementary phase-space symmetry transforms"""

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ..config import MASS_LOSS_TOL
from ..errors import DomainError, NormalizationError, TruncationError
from ..utils.logging import log
from .model import Moments


def _require_state(g, operation):
    if g.kind == "symbol":
        raise DomainError(f"{operation} needs a density or Wigner grid, got a symbol grid")


def moments_of_grid(g):
    """
    Means and dispersion matrix of a single-mode grid by trapezoidal quadrature

    Args:
        g: PhaseGrid of kind 'density' or 'wigner'

    Returns:
        Moments with mean (<q>, <p>) and the 2x2 dispersion matrix
    """
    _require_state(g, "moments_of_grid")
    mass = g.mass()
    if abs(mass - 1.0) > g.tol:
        raise NormalizationError(f"Grid integrates to {mass:.9f}, outside tolerance {g.tol:g}", integral=mass)

    Q, P = g.window.mesh()
    dw = g.as_density_values() * g.weights() / mass
    mean_q = float(np.sum(dw * Q))
    mean_p = float(np.sum(dw * P))
    dq = Q - mean_q
    dp = P - mean_p
    sigma_qq = float(np.sum(dw * dq * dq))
    sigma_pp = float(np.sum(dw * dp * dp))
    sigma_qp = float(np.sum(dw * dq * dp))
    return Moments([mean_q, mean_p], [[sigma_qq, sigma_qp], [sigma_qp, sigma_pp]])


def sample_at(g, Q, P):
    """Bilinear interpolation of grid values at arbitrary points, zero outside the window"""
    interpolator = RegularGridInterpolator((g.q, g.p), g.values, method="linear",
                                           bounds_error=False, fill_value=0.0)
    points = np.stack([np.asarray(Q), np.asarray(P)], axis=-1)
    return interpolator(points)


def resampled(g, values, operation):
    """
    Wrap resampled values, refusing when too much mass fell off the window

    The surviving values are rescaled so the integral matches the source exactly.
    """
    source = g.integral()
    moved = g.with_values(values, kind="symbol").integral()
    if g.kind == "symbol" or source == 0:
        return g.with_values(values)

    lost = float(abs(1.0 - np.real(moved / source)))
    if lost > MASS_LOSS_TOL:
        raise TruncationError(
            f"{operation} moved {lost:.3e} of the mass outside the window (limit {MASS_LOSS_TOL:g})",
            lost_mass=lost)
    log.debug(f"{operation}: resampling changed the integral by {lost:.3e}, renormalizing")
    return g.with_values(np.asarray(values) * np.real(source / moved))


def _is_symmetric(lo, hi):
    return abs(lo + hi) <= 1e-12 * max(abs(lo), abs(hi))


def reflect_time(g, resample=False):
    """
    Time reversal f(q, p) -> f(q, -p)

    Args:
        g: PhaseGrid
        resample: Interpolate onto the same window when the momentum range is not symmetric

    Returns:
        Reflected PhaseGrid
    """
    if _is_symmetric(g.p_min, g.p_max):
        return g.with_values(g.values[:, ::-1])
    if not resample:
        raise DomainError(f"Momentum range [{g.p_min}, {g.p_max}] is not symmetric; pass resample=True")
    Q, P = g.window.mesh()
    return resampled(g, sample_at(g, Q, -P), "reflect_time")


def reflect_parity(g, resample=False):
    """Mirror reflection f(q, p) -> f(-q, p)"""
    if _is_symmetric(g.q_min, g.q_max):
        return g.with_values(g.values[::-1, :])
    if not resample:
        raise DomainError(f"Position range [{g.q_min}, {g.q_max}] is not symmetric; pass resample=True")
    Q, P = g.window.mesh()
    return resampled(g, sample_at(g, -Q, P), "reflect_parity")


def reflect_full(g, resample=False):
    """Full inversion f(q, p) -> f(-q, -p)"""
    return reflect_parity(reflect_time(g, resample), resample)


def shift(g, q0, p0, resample=False):
    """
    Move the origin of the reference frame: f(q, p) -> f(q + q0, p + p0)

    Args:
        g: PhaseGrid
        q0: Position shift
        p0: Momentum shift
        resample: Keep the window and interpolate instead of translating the window with the data

    Returns:
        Shifted PhaseGrid; means move by (-q0, -p0)
    """
    if q0 == 0 and p0 == 0:
        return g
    if not resample:
        return g.with_values(g.values, window=g.window.translated(-q0, -p0))
    Q, P = g.window.mesh()
    return resampled(g, sample_at(g, Q + q0, P + p0), "shift")
