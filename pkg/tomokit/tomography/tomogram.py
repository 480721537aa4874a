"""Tomogram representations and the forward tomographic transform"""

import concurrent.futures
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.stats import multivariate_normal, norm

from ..config import ANALYTIC_TOL, CPU_COUNT, DEFAULT_N_X, MAX_N_X, X_NODES_PER_SD
from ..errors import DomainError, FrameError, NormalizationError, ScaleError
from ..phase_space.model import Frame, GaussianState, ScaleParams, frame_from_polar
from ..quantization.basis import hermite_functions
from ..utils.logging import log

# Half-width of analytic sampling ranges, in standard deviations
SAMPLE_SPAN = 12.0


def as_frame(frame):
    return frame if isinstance(frame, Frame) else Frame(*frame)


def uniform_frames(n_angles, lam=0.0):
    """Frames at angles k*pi/n_angles, k = 0..n_angles-1, all with scaling parameter lam"""
    if n_angles < 1:
        raise DomainError(f"Need at least one angle, got {n_angles}")
    return [frame_from_polar(lam, k * math.pi / n_angles) for k in range(n_angles)]


def trapezoid_weights(n, h):
    w = np.full(n, h)
    w[[0, -1]] *= 0.5
    return w


class Tomogram:
    """Probability density of X = mu*q + nu*p for every frame (mu, nu)"""

    n_modes = 1

    def pdf(self, x, frame):
        raise NotImplementedError

    def mean_x(self, frame):
        raise NotImplementedError

    def var_x(self, frame):
        raise NotImplementedError

    def x_window(self, frame):
        """Range of X carrying essentially all of the probability at this frame"""
        mean, sd = self.mean_x(frame), math.sqrt(self.var_x(frame))
        return mean - SAMPLE_SPAN * sd, mean + SAMPLE_SPAN * sd

    def normalization(self, frame, n_x=4097):
        lo, hi = self.x_window(frame)
        x = np.linspace(lo, hi, n_x)
        return float(np.sum(trapezoid_weights(n_x, x[1] - x[0]) * self.pdf(x, frame)))

    def sample(self, frames, n_x=DEFAULT_N_X, x_min=None, x_max=None):
        """
        Tabulate the tomogram on a shared X grid

        The grid is refined past n_x when needed so that the narrowest frame
        keeps X_NODES_PER_SD nodes per standard deviation, up to MAX_N_X.

        Args:
            frames: Frames to sample
            n_x: Minimum number of X samples
            x_min: Lower X bound (default covers every frame's x_window)
            x_max: Upper X bound

        Returns:
            SampledTomogram
        """
        frames = [as_frame(f) for f in frames]
        if x_min is None or x_max is None:
            ranges = np.array([self.x_window(f) for f in frames])
            x_min = float(ranges[:, 0].min()) if x_min is None else x_min
            x_max = float(ranges[:, 1].max()) if x_max is None else x_max
        narrowest = min(math.sqrt(self.var_x(f)) for f in frames)
        needed = int(math.ceil(X_NODES_PER_SD * (x_max - x_min) / narrowest)) + 1
        if needed > n_x:
            if needed > MAX_N_X:
                log.warning(f"Narrowest frame (sd {narrowest:.3g}) needs {needed} X samples, capped at {MAX_N_X}")
                needed = MAX_N_X
            log.info(f"Refining the X grid from {n_x} to {needed} samples for the narrowest frame")
            n_x = needed
        x = np.linspace(x_min, x_max, n_x)
        values = np.array([self.pdf(x, f) for f in frames])
        return SampledTomogram(tuple(frames), x_min, x_max, values)


@dataclass(frozen=True, eq=False)
class GaussianTomogram(Tomogram):
    """Exact tomogram of a Gaussian state; multimode states take one frame per mode"""

    state: GaussianState

    @property
    def n_modes(self):
        return self.state.n_modes

    def projection(self, frames):
        """Matrix M with X = M z for per-mode frames, z = (q_1..q_n, p_1..p_n)"""
        n = self.n_modes
        frames = [as_frame(frames)] if isinstance(frames, (Frame, tuple)) and n == 1 else [as_frame(f) for f in frames]
        if len(frames) != n:
            raise FrameError(f"A {n}-mode tomogram needs {n} frames, got {len(frames)}")
        M = np.zeros((n, 2 * n))
        for s, f in enumerate(frames):
            M[s, s] = f.mu
            M[s, s + n] = f.nu
        return M

    def joint_moments(self, frames):
        """Mean vector and covariance matrix of (X_1..X_n)"""
        M = self.projection(frames)
        return M @ self.state.mean, M @ self.state.sigma @ M.T

    def mean_x(self, frame):
        mean, _ = self.joint_moments(frame)
        return float(mean[0]) if self.n_modes == 1 else mean

    def var_x(self, frame):
        _, cov = self.joint_moments(frame)
        return float(cov[0, 0]) if self.n_modes == 1 else cov

    def pdf(self, x, frame):
        if self.n_modes != 1:
            return self.pdf_joint(x, frame)
        mean, var = self.mean_x(frame), self.var_x(frame)
        if not var > 0:
            raise DomainError(f"Degenerate tomogram at frame {as_frame(frame).as_tuple()}: variance {var}")
        return norm.pdf(np.asarray(x, dtype=float), loc=mean, scale=math.sqrt(var))

    def pdf_joint(self, xs, frames):
        """Joint density of per-mode variables X_s = mu_s q_s + nu_s p_s"""
        mean, cov = self.joint_moments(frames)
        return multivariate_normal(mean, cov).pdf(xs)


@dataclass(frozen=True)
class FockTomogram(Tomogram):
    """Exact tomogram of the number state |n>; rotation invariant, so only |F| matters"""

    n: int
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"Fock level must be a nonnegative integer, got {self.n}")

    def pdf(self, x, frame):
        width = as_frame(frame).norm * math.sqrt(self.hbar)
        psi = hermite_functions(self.n + 1, np.asarray(x, dtype=float) / width)[self.n]
        return psi * psi / width

    def mean_x(self, frame):
        return 0.0

    def var_x(self, frame):
        return as_frame(frame).norm ** 2 * (self.n + 0.5) * self.hbar


@dataclass(frozen=True, eq=False)
class ScaledTomogram(Tomogram):
    """Tomogram evaluated at remapped frames (mu/lambda_q, nu/lambda_p)"""

    base: Tomogram
    params: ScaleParams

    def source_frame(self, frame):
        frame = as_frame(frame)
        return Frame(frame.mu / self.params.lambda_q[0], frame.nu / self.params.lambda_p[0])

    def pdf(self, x, frame):
        return self.base.pdf(x, self.source_frame(frame))

    def mean_x(self, frame):
        return self.base.mean_x(self.source_frame(frame))

    def var_x(self, frame):
        return self.base.var_x(self.source_frame(frame))


@dataclass(frozen=True, eq=False)
class SampledTomogram(Tomogram):
    """Marginals tabulated on one shared X grid, one row per frame"""

    frames: tuple
    x_min: float
    x_max: float
    values: np.ndarray
    tol: float = ANALYTIC_TOL

    def __post_init__(self):
        frames = tuple(as_frame(f) for f in self.frames)
        if not frames:
            raise FrameError("A sampled tomogram needs at least one frame")
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != len(frames) or values.shape[1] < 2:
            raise DomainError(f"Values of shape {values.shape} do not match {len(frames)} frames")
        if not self.x_max > self.x_min:
            raise DomainError(f"Empty X range [{self.x_min}, {self.x_max}]")
        if not np.all(np.isfinite(values)):
            raise DomainError("Tomogram values must all be finite")
        values.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "values", values)

    @property
    def n_x(self):
        return self.values.shape[1]

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_x)

    @property
    def hx(self):
        return (self.x_max - self.x_min) / (self.n_x - 1)

    def weights(self):
        return trapezoid_weights(self.n_x, self.hx)

    def find(self, frame, rtol=1e-12):
        """
        Locate a stored frame F_k with frame = c * F_k

        Returns:
            (index, c), preferring an exact match, or None
        """
        frame = as_frame(frame)
        for k, f in enumerate(self.frames):
            if f == frame:
                return k, 1.0
        for k, f in enumerate(self.frames):
            cross = frame.mu * f.nu - frame.nu * f.mu
            if abs(cross) <= rtol * frame.norm * f.norm:
                return k, (frame.mu * f.mu + frame.nu * f.nu) / f.norm ** 2
        return None

    def _locate(self, frame):
        found = self.find(frame)
        if found is None:
            raise FrameError(f"Frame {as_frame(frame).as_tuple()} is not a multiple of any sampled frame")
        return found

    def row_moments(self, k):
        w = self.weights() * self.values[k]
        mass = w.sum()
        mean = float(np.sum(w * self.x) / mass)
        var = float(np.sum(w * (self.x - mean) ** 2) / mass)
        return mean, var

    def row_pdf(self, k, x):
        """Cubic-spline evaluation of stored row k, zero outside the X range"""
        x = np.asarray(x, dtype=float)
        spline = make_interp_spline(self.x, self.values[k], k=3)
        inside = (x >= self.x_min) & (x <= self.x_max)
        return np.where(inside, spline(np.clip(x, self.x_min, self.x_max)), 0.0)

    def pdf(self, x, frame):
        # omega(X, c F) = omega(X / c, F) / |c|
        k, c = self._locate(frame)
        return self.row_pdf(k, np.asarray(x, dtype=float) / c) / abs(c)

    def mean_x(self, frame):
        k, c = self._locate(frame)
        return c * self.row_moments(k)[0]

    def var_x(self, frame):
        k, c = self._locate(frame)
        return c * c * self.row_moments(k)[1]

    def x_window(self, frame):
        _, c = self._locate(frame)
        return tuple(sorted((c * self.x_min, c * self.x_max)))

    def normalization_residuals(self):
        return np.abs(self.values @ self.weights() - 1.0)


def tomogram_of_gaussian(state, frame):
    """
    Closed-form mean and variance of X for a Gaussian state

    Args:
        state: GaussianState
        frame: Frame (single mode) or one Frame per mode

    Returns:
        (mean_X, var_X); for multimode states the mean vector and covariance matrix
    """
    t = GaussianTomogram(state)
    return t.mean_x(frame), t.var_x(frame)


def _bin_frame(frame, Q, P, mass, x_min, hx, n_x):
    # tent deposit onto the two nearest X nodes conserves mass exactly
    pos = (frame.mu * Q + frame.nu * P - x_min) / hx
    i0 = np.clip(np.floor(pos).astype(np.int64), 0, n_x - 2)
    frac = np.clip(pos - i0, 0.0, 1.0)
    out = np.bincount(i0, weights=mass * (1.0 - frac), minlength=n_x)
    out += np.bincount(i0 + 1, weights=mass * frac, minlength=n_x)
    return out[:n_x] / hx


def _fourier_frame(frame, q, p, mass, x, ks, kw):
    # projection slice: omega_hat(k) = sum_ij m_ij exp(-i k (mu q_i + nu p_j))
    eq = np.exp(-1j * np.outer(ks * frame.mu, q))
    ep = np.exp(-1j * np.outer(ks * frame.nu, p))
    char = np.einsum("kj,kj->k", eq @ mass, ep)
    return (np.exp(1j * np.outer(x, ks)) @ (kw * char)).real / (2.0 * np.pi)


def tomogram_of_grid(g, frames, n_x=DEFAULT_N_X, x_min=None, x_max=None, method="binning", workers=None):
    """
    Forward tomographic transform of a sampled density or Wigner function

    Args:
        g: PhaseGrid of kind 'density' or 'wigner' (Wigner grids enter as W / 2pi)
        frames: Frames (mu, nu)
        n_x: Number of X samples on the shared grid
        x_min: Lower X bound (default: smallest projection of the window corners)
        x_max: Upper X bound (default: largest projection of the window corners)
        method: 'binning' (tent deposit, mass exact) or 'fourier' (projection slice, spectral)
        workers: Worker threads (default: physical cores)

    Returns:
        SampledTomogram carrying the grid's tolerance
    """
    frames = [as_frame(f) for f in frames]
    if not frames:
        raise FrameError("At least one frame is required")
    if g.kind == "symbol":
        raise DomainError("Tomograms are defined for density and Wigner grids only")
    mass_total = g.mass()
    if abs(mass_total - 1.0) > g.tol:
        raise NormalizationError(f"Grid integrates to {mass_total:.9f}, outside tolerance {g.tol:g}",
                                 integral=mass_total)
    if method not in ("binning", "fourier"):
        raise DomainError(f"Unknown tomogram method '{method}'")

    corners = np.array([[g.q_min, g.p_min], [g.q_min, g.p_max], [g.q_max, g.p_min], [g.q_max, g.p_max]])
    projections = np.array([corners @ np.array(f.as_tuple()) for f in frames])
    x_min = float(projections.min()) if x_min is None else float(x_min)
    x_max = float(projections.max()) if x_max is None else float(x_max)
    x = np.linspace(x_min, x_max, n_x)
    hx = x[1] - x[0]

    mass = g.as_density_values() * g.weights()
    if method == "binning":
        Q, P = g.window.mesh()
        Qf, Pf, mf = Q.ravel(), P.ravel(), mass.ravel()
        task = lambda f: _bin_frame(f, Qf, Pf, mf, x_min, hx, n_x)
    else:
        # k spacing gives a period of twice the X range, so nothing wraps back
        dk = np.pi / (x_max - x_min)
        ks = dk * np.arange(-(n_x - 1), n_x)
        kw = trapezoid_weights(len(ks), dk)
        task = lambda f: _fourier_frame(f, g.q, g.p, mass, x, ks, kw)

    workers = workers or CPU_COUNT
    log.debug(f"Projecting {g.n_q}x{g.n_p} grid onto {len(frames)} frames ({method}, {workers} workers)")
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(task, frames))

    return SampledTomogram(tuple(frames), x_min, x_max, np.array(rows), tol=g.tol)


def remap_tomogram(t, params):
    """
    Tomogram of the scaled density: omega_s(X, mu, nu) = omega(X, mu/lambda_q, nu/lambda_p)

    Args:
        t: Tomogram
        params: ScaleParams

    Returns:
        Tomogram of the same representation where possible
    """
    if isinstance(t, GaussianTomogram):
        m = t.state.moments().scaled(params)
        return GaussianTomogram(GaussianState(m.mean, m.sigma))
    if params.n_modes != 1:
        raise ScaleError(f"{params.n_modes}-mode parameters applied to a single-mode tomogram")
    lq, lp = params.lambda_q[0], params.lambda_p[0]
    if isinstance(t, SampledTomogram):
        frames = tuple(Frame(lq * f.mu, lp * f.nu) for f in t.frames)
        return SampledTomogram(frames, t.x_min, t.x_max, t.values, tol=t.tol)
    if isinstance(t, ScaledTomogram):
        return ScaledTomogram(t.base, t.params.compose(params))
    return ScaledTomogram(t, params)


def reflect_frames(t, flip_mu=False, flip_nu=False):
    """Tomogram of f(-q, p) and/or f(q, -p), obtained by flipping frame components"""
    return remap_tomogram(t, ScaleParams(-1.0 if flip_mu else 1.0, -1.0 if flip_nu else 1.0))
