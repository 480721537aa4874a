"""Inverse tomographic transform by the Fourier-slice route"""

import concurrent.futures
import math

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ..config import ANALYTIC_TOL, CPU_COUNT, DEFAULT_ANGLES, MAX_ANGLE_GAP
from ..errors import CoverageError, DomainError
from ..phase_space.model import FockState, PhaseGrid, Window, gaussian_grid
from ..utils.logging import log
from .tomogram import FockTomogram, GaussianTomogram, SampledTomogram, uniform_frames

# Upper bound on radial samples per direction
MAX_RADIAL = 8193


def fold_directions(frames):
    """
    Unit directions of the frames folded into [0, pi)

    Returns:
        List of (theta, sign, index) sorted by theta, one entry per distinct direction;
        sign is -1 when the frame points into the opposite half-plane
    """
    folded = []
    for index, f in enumerate(frames):
        theta = f.angle
        sign = 1.0
        if theta < 0 or theta >= math.pi:
            theta = theta + math.pi if theta < 0 else theta - math.pi
            sign = -1.0
        folded.append((theta, sign, index))
    folded.sort()

    distinct = []
    for entry in folded:
        if distinct and entry[0] - distinct[-1][0] < 1e-12:
            continue
        distinct.append(entry)
    return distinct


def angular_gap(thetas):
    """Largest gap between sorted directions on the half circle, wrap-around included"""
    thetas = np.asarray(thetas)
    gaps = np.append(np.diff(thetas), thetas[0] + math.pi - thetas[-1])
    return float(gaps.max())


def _characteristic(t, index, sign, ks):
    # chi(k, theta) = E[exp(i k X')] with X' = sign * X / |F| the unit-frame variable
    f = t.frames[index]
    scale = sign / f.norm
    row = t.weights() * t.values[index]
    chi = np.exp(1j * np.outer(ks, scale * t.x)) @ row
    chi[np.abs(ks) > math.pi * f.norm / t.hx] = 0.0
    return chi


def invert_tomogram(t, window=None, kind="wigner", max_gap=MAX_ANGLE_GAP, workers=None):
    """
    Reconstruct the phase-space function from its tomogram

    Args:
        t: Tomogram; Gaussian and Fock tomograms return their exact grids
        window: Output Window (default window if None)
        kind: 'wigner' (W = 2*pi*f, may dip below zero) or 'density' (negatives clipped)
        max_gap: Largest tolerated gap between frame directions
        workers: Worker threads (default: physical cores)

    Returns:
        Normalized PhaseGrid
    """
    window = window or Window.default()
    if kind not in ("wigner", "density"):
        raise DomainError(f"Reconstruction kind must be 'wigner' or 'density', got '{kind}'")

    if isinstance(t, GaussianTomogram):
        if t.n_modes != 1:
            raise DomainError("Phase-space reconstruction is single-mode only")
        return gaussian_grid(t.state, window, kind=kind)
    if isinstance(t, FockTomogram):
        return FockState(t.n, t.hbar).wigner_grid(window)
    if not isinstance(t, SampledTomogram):
        t = t.sample(uniform_frames(DEFAULT_ANGLES))

    directions = fold_directions(t.frames)
    thetas = np.array([d[0] for d in directions])
    gap = angular_gap(thetas)
    if gap > max_gap:
        raise CoverageError(f"Frame directions leave a gap of {gap:.4f} rad (limit {max_gap:.4f})", max_gap=gap)

    # Cartesian spectral grid: Nyquist of the output window, period twice its width
    du = math.pi / (window.q_max - window.q_min)
    dv = math.pi / (window.p_max - window.p_min)
    u = du * np.arange(-(window.n_q - 1), window.n_q)
    v = dv * np.arange(-(window.n_p - 1), window.n_p)

    radius = max(max(abs(t.x_min), abs(t.x_max)) / t.frames[i].norm for _, _, i in directions)
    dk = math.pi / (4.0 * radius)
    n_half = min(int(math.ceil(math.hypot(u[-1], v[-1]) / dk)), MAX_RADIAL // 2)
    ks = dk * np.arange(-n_half, n_half + 1)

    workers = workers or CPU_COUNT
    log.debug(f"Inverting {len(directions)} directions onto {window.n_q}x{window.n_p} "
              f"({len(ks)} radial samples, max gap {gap:.4f})")
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        chi = np.array(list(executor.map(lambda d: _characteristic(t, d[2], d[1], ks), directions)))

    # chi(k, theta + pi) = chi(-k, theta) closes the half circle
    thetas_ext = np.concatenate([[thetas[-1] - math.pi], thetas, [thetas[0] + math.pi]])
    chi_ext = np.vstack([chi[-1][::-1], chi, chi[0][::-1]])
    interpolator = RegularGridInterpolator((thetas_ext, ks), chi_ext, method="linear",
                                           bounds_error=False, fill_value=0.0)

    U, V = np.meshgrid(u, v, indexing="ij")
    angle = np.arctan2(V, U)
    folded = np.mod(angle, math.pi)
    radial = np.hypot(U, V) * np.where((angle >= 0) & (angle < math.pi), 1.0, -1.0)
    spectrum = interpolator(np.stack([folded, radial], axis=-1))

    eq = np.exp(-1j * np.outer(window.q, u))
    ep = np.exp(-1j * np.outer(window.p, v))
    f = (eq @ spectrum @ ep.T).real * du * dv / (4.0 * math.pi ** 2)

    weights = window.weights()
    if kind == "density":
        clipped = float(np.sum(weights * np.minimum(f, 0.0)))
        log.debug(f"Clipping {clipped:.3e} of negative reconstruction mass")
        f = np.maximum(f, 0.0)
    f = f / np.sum(weights * f)
    values = 2.0 * math.pi * f if kind == "wigner" else f
    return PhaseGrid(window.q_min, window.q_max, window.p_min, window.p_max, values, kind=kind, tol=ANALYTIC_TOL)


def l1_distance(a, b):
    """Trapezoidal L1 distance of two grids on the same window, in the density convention"""
    if not a.window.same_as(b.window):
        raise DomainError("L1 distance needs grids on the same window")
    return float(np.sum(a.weights() * np.abs(a.as_density_values() - b.as_density_values())))
