"""Domain types for phase-space states, reference frames and sampling grids"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import eval_laguerre
from scipy.stats import multivariate_normal

from ..config import DEFAULT_WINDOW, DEFAULT_SAMPLES, ANALYTIC_TOL, NEGATIVE_FLOOR
from ..errors import DensityError, DomainError, FrameError, NormalizationError, ScaleError

GRID_KINDS = ("density", "wigner", "symbol")


def _readonly(array, dtype=None):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Window:
    """Rectangular sampling window with uniform sample counts"""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    n_q: int = DEFAULT_SAMPLES
    n_p: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if not (self.q_max > self.q_min and self.p_max > self.p_min):
            raise DomainError(f"Empty window: q [{self.q_min}, {self.q_max}], p [{self.p_min}, {self.p_max}]")
        if self.n_q < 2 or self.n_p < 2:
            raise DomainError(f"A window needs at least 2 samples per axis, got {self.n_q}x{self.n_p}")

    @classmethod
    def default(cls, n=DEFAULT_SAMPLES):
        q_min, q_max, p_min, p_max = DEFAULT_WINDOW
        return cls(q_min, q_max, p_min, p_max, n, n)

    @classmethod
    def square(cls, half_width, n=DEFAULT_SAMPLES):
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @property
    def q(self):
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def p(self):
        return np.linspace(self.p_min, self.p_max, self.n_p)

    @property
    def hq(self):
        return (self.q_max - self.q_min) / (self.n_q - 1)

    @property
    def hp(self):
        return (self.p_max - self.p_min) / (self.n_p - 1)

    def mesh(self):
        """Return (Q, P) coordinate arrays, q as the slow index"""
        return np.meshgrid(self.q, self.p, indexing="ij")

    def weights(self):
        """Trapezoidal quadrature weights of shape (n_q, n_p)"""
        wq = np.full(self.n_q, self.hq)
        wq[[0, -1]] *= 0.5
        wp = np.full(self.n_p, self.hp)
        wp[[0, -1]] *= 0.5
        return np.outer(wq, wp)

    def translated(self, dq, dp):
        return Window(self.q_min + dq, self.q_max + dq, self.p_min + dp, self.p_max + dp, self.n_q, self.n_p)

    def same_as(self, other, rtol=1e-12):
        if (self.n_q, self.n_p) != (other.n_q, other.n_p):
            return False
        a = np.array([self.q_min, self.q_max, self.p_min, self.p_max])
        b = np.array([other.q_min, other.q_max, other.p_min, other.p_max])
        return bool(np.allclose(a, b, rtol=rtol, atol=rtol))


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Uniform samples of a phase-space function over a rectangle

    kind is one of:
        density: classical probability density f(q, p), nonnegative, unit integral
        wigner:  quasi-probability W(q, p) = 2*pi*(density convention), may be negative
        symbol:  any phase-space function (observables, star products), may be complex
    """

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    values: np.ndarray
    kind: str = "density"
    tol: float = ANALYTIC_TOL

    def __post_init__(self):
        if self.kind not in GRID_KINDS:
            raise DomainError(f"Unknown grid kind '{self.kind}', expected one of {GRID_KINDS}")
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise DomainError(f"Grid values must be a matrix, got shape {values.shape}")
        if np.iscomplexobj(values) and self.kind != "symbol":
            if np.max(np.abs(values.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(values))):
                raise DomainError(f"A {self.kind} grid must be real-valued")
            values = values.real
        dtype = complex if np.iscomplexobj(values) else float
        object.__setattr__(self, "values", _readonly(values, dtype))
        # Window validates the rectangle and sample counts
        Window(self.q_min, self.q_max, self.p_min, self.p_max, self.n_q, self.n_p)
        if not np.all(np.isfinite(self.values)):
            raise DomainError("Grid values must all be finite")

        if self.kind == "density":
            vmax = float(self.values.max())
            vmin = float(self.values.min())
            if vmin < -NEGATIVE_FLOOR * max(vmax, 0.0):
                raise DensityError(f"Classical density takes negative value {vmin:.3e}", min_value=vmin)
            integral = self.mass()
            if abs(integral - 1.0) > self.tol:
                raise NormalizationError(
                    f"Classical density integrates to {integral:.9f} (tolerance {self.tol:g})",
                    integral=integral)

    @classmethod
    def from_function(cls, func, window=None, kind="density", tol=ANALYTIC_TOL):
        """
        Sample a vectorized function f(Q, P) on a window

        Args:
            func: Callable taking coordinate arrays (Q, P) with q as the slow index
            window: Sampling Window (default window if None)
            kind: Grid kind
            tol: Declared normalization tolerance

        Returns:
            PhaseGrid with the sampled values
        """
        window = window or Window.default()
        Q, P = window.mesh()
        return cls(window.q_min, window.q_max, window.p_min, window.p_max,
                   func(Q, P), kind=kind, tol=tol)

    @property
    def n_q(self):
        return self.values.shape[0]

    @property
    def n_p(self):
        return self.values.shape[1]

    @property
    def window(self):
        return Window(self.q_min, self.q_max, self.p_min, self.p_max, self.n_q, self.n_p)

    @property
    def q(self):
        return self.window.q

    @property
    def p(self):
        return self.window.p

    def weights(self):
        return self.window.weights()

    def integral(self):
        """Trapezoidal integral of the raw values"""
        return trapezoid(trapezoid(self.values, self.p, axis=1), self.q)

    def mass(self):
        """Probability mass, applying the 1/(2*pi) convention for Wigner grids"""
        integral = self.integral()
        if self.kind == "wigner":
            integral = integral / (2.0 * np.pi)
        return float(np.real(integral))

    def as_density_values(self):
        """Values in the classical-density convention (W / 2pi for Wigner grids)"""
        if self.kind == "wigner":
            return self.values / (2.0 * np.pi)
        return self.values

    def with_values(self, values, kind=None, tol=None, window=None):
        window = window or self.window
        return PhaseGrid(window.q_min, window.q_max, window.p_min, window.p_max, values,
                         kind=kind or self.kind, tol=self.tol if tol is None else tol)


@dataclass(frozen=True)
class Frame:
    """Reference frame (mu, nu) of the measured variable X = mu*q + nu*p"""

    mu: float
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "nu", float(self.nu))
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise FrameError(f"Frame components must be finite, got ({self.mu}, {self.nu})")
        if self.mu == 0.0 and self.nu == 0.0:
            raise FrameError("Frame (0, 0) does not define a measured variable")

    @property
    def norm(self):
        return math.hypot(self.mu, self.nu)

    @property
    def angle(self):
        """Rotation angle theta of the frame direction, in (-pi, pi]"""
        return math.atan2(self.nu, self.mu)

    def scaled(self, factor):
        return Frame(self.mu * factor, self.nu * factor)

    def as_tuple(self):
        return (self.mu, self.nu)


def frame_from_polar(lam, theta):
    """
    Build a frame from its scaling parameter and rotation angle

    Args:
        lam: Scaling parameter lambda
        theta: Rotation angle

    Returns:
        Frame (e^lambda cos theta, e^-lambda sin theta)
    """
    if not (math.isfinite(lam) and math.isfinite(theta)):
        raise FrameError(f"Polar frame parameters must be finite, got ({lam}, {theta})")
    mu = math.exp(lam) * math.cos(theta)
    nu = math.exp(-lam) * math.sin(theta)
    # cos(pi/2) is not exactly zero in floating point; snap that residue
    if abs(mu) < 1e-15 * math.exp(lam):
        mu = 0.0
    if abs(nu) < 1e-15 * math.exp(-lam):
        nu = 0.0
    return Frame(mu, nu)


@dataclass(frozen=True, eq=False)
class ScaleParams:
    """Per-mode scaling parameters lambda_q, lambda_p; the classical group is all nonzero reals"""

    lambda_q: tuple
    lambda_p: tuple

    def __post_init__(self):
        lq = tuple(float(v) for v in np.atleast_1d(self.lambda_q))
        lp = tuple(float(v) for v in np.atleast_1d(self.lambda_p))
        if len(lq) != len(lp):
            raise ScaleError(f"lambda_q has {len(lq)} modes but lambda_p has {len(lp)}")
        if any(v == 0.0 or not math.isfinite(v) for v in lq + lp):
            raise ScaleError(f"Scaling parameters must be finite and nonzero, got {lq}, {lp}")
        object.__setattr__(self, "lambda_q", lq)
        object.__setattr__(self, "lambda_p", lp)

    @classmethod
    def identity(cls, n_modes=1):
        return cls((1.0,) * n_modes, (1.0,) * n_modes)

    @classmethod
    def uniform(cls, lambda_q, lambda_p, n_modes=1):
        return cls((lambda_q,) * n_modes, (lambda_p,) * n_modes)

    @property
    def n_modes(self):
        return len(self.lambda_q)

    def vector(self):
        """Parameters in moment ordering q_1..q_n, p_1..p_n"""
        return np.array(self.lambda_q + self.lambda_p)

    def products(self):
        """Per-mode |lambda_q * lambda_p|"""
        return np.abs(np.array(self.lambda_q) * np.array(self.lambda_p))

    def compose(self, other):
        if other.n_modes != self.n_modes:
            raise ScaleError(f"Cannot compose {self.n_modes}-mode and {other.n_modes}-mode parameters")
        return ScaleParams(tuple(a * b for a, b in zip(self.lambda_q, other.lambda_q)),
                           tuple(a * b for a, b in zip(self.lambda_p, other.lambda_p)))

    def inverse(self):
        return ScaleParams(tuple(1.0 / v for v in self.lambda_q), tuple(1.0 / v for v in self.lambda_p))

    def __eq__(self, other):
        if not isinstance(other, ScaleParams):
            return NotImplemented
        return self.lambda_q == other.lambda_q and self.lambda_p == other.lambda_p

    def __hash__(self):
        return hash((self.lambda_q, self.lambda_p))


def _determinant(sigma):
    if sigma.shape == (2, 2):
        return float(sigma[0, 0] * sigma[1, 1] - sigma[0, 1] * sigma[1, 0])
    return float(np.linalg.det(sigma))


@dataclass(frozen=True, eq=False)
class Moments:
    """First and second moments; d and t are recomputed from sigma"""

    mean: np.ndarray
    sigma: np.ndarray
    d: float = field(init=False)
    t: float = field(init=False)

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        mean = np.array(self.mean, dtype=float).ravel()
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise DomainError(f"Dispersion matrix must be 2n x 2n, got shape {sigma.shape}")
        if mean.shape[0] != sigma.shape[0]:
            raise DomainError(f"Mean has length {mean.shape[0]} but sigma is {sigma.shape[0]}x{sigma.shape[0]}")
        scale = max(1.0, float(np.max(np.abs(sigma))))
        if np.max(np.abs(sigma - sigma.T)) > 1e-12 * scale:
            raise DomainError("Dispersion matrix must be symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        object.__setattr__(self, "mean", _readonly(mean))
        object.__setattr__(self, "sigma", _readonly(sigma))
        object.__setattr__(self, "d", _determinant(sigma))
        object.__setattr__(self, "t", float(np.trace(sigma)))

    @property
    def n_modes(self):
        return self.sigma.shape[0] // 2

    def mode_block(self, s):
        """2x2 dispersion block (q_s, p_s) of mode s"""
        n = self.n_modes
        idx = [s, s + n]
        return self.sigma[np.ix_(idx, idx)]

    def scaled(self, params):
        """Moments of the density |lq*lp| f(lq*q, lp*p): q-moments divide by lq, p-moments by lp"""
        if params.n_modes != self.n_modes:
            raise ScaleError(f"{params.n_modes}-mode parameters applied to {self.n_modes}-mode moments")
        factors = 1.0 / params.vector()
        return Moments(self.mean * factors, self.sigma * np.outer(factors, factors))

    @property
    def sigma_qq(self):
        return float(self.sigma[0, 0])

    @property
    def sigma_pp(self):
        return float(self.sigma[self.n_modes, self.n_modes])

    @property
    def sigma_qp(self):
        return float(self.sigma[0, self.n_modes])


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Gaussian state carried exactly by its mean and dispersion matrix"""

    mean: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        m = Moments(self.mean, self.sigma)
        sigma = m.sigma
        if np.any(np.diag(sigma) < 0):
            raise DomainError("Dispersion matrix has a negative variance")
        if m.d < -1e-12 * max(1.0, m.t) ** sigma.shape[0] or m.t < 0:
            raise DomainError(f"Dispersion matrix has det {m.d:.3e} and trace {m.t:.3e}")
        object.__setattr__(self, "mean", m.mean)
        object.__setattr__(self, "sigma", m.sigma)

    @classmethod
    def isotropic(cls, variance, n_modes=1, mean=None):
        mean = np.zeros(2 * n_modes) if mean is None else mean
        return cls(mean, variance * np.eye(2 * n_modes))

    @classmethod
    def vacuum(cls, n_modes=1, hbar=1.0):
        return cls.isotropic(hbar / 2.0, n_modes)

    @classmethod
    def single_mode(cls, sigma_qq, sigma_pp, sigma_qp=0.0, mean_q=0.0, mean_p=0.0):
        return cls([mean_q, mean_p], [[sigma_qq, sigma_qp], [sigma_qp, sigma_pp]])

    @property
    def n_modes(self):
        return self.sigma.shape[0] // 2

    def moments(self):
        return Moments(self.mean, self.sigma)

    def density(self, Q, P):
        """Classical probability density f(q, p) of a single-mode state"""
        if self.n_modes != 1:
            raise DomainError("Phase-space sampling is single-mode only")
        points = np.stack([Q, P], axis=-1)
        return multivariate_normal(self.mean, self.sigma, allow_singular=False).pdf(points)


@dataclass(frozen=True)
class FockState:
    """Oscillator number state |n> at Planck parameter hbar"""

    n: int
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"Fock level must be a nonnegative integer, got {self.n}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    def wigner(self, Q, P):
        """Wigner function in the 2*pi*density convention"""
        r2 = (np.asarray(Q) ** 2 + np.asarray(P) ** 2) / self.hbar
        return 2.0 * (-1) ** self.n * np.exp(-r2) * eval_laguerre(self.n, 2.0 * r2) / self.hbar

    def moments(self):
        variance = (self.n + 0.5) * self.hbar
        return Moments(np.zeros(2), variance * np.eye(2))

    def wigner_grid(self, window=None, tol=ANALYTIC_TOL):
        return PhaseGrid.from_function(self.wigner, window, kind="wigner", tol=tol)


def gaussian_grid(state, window=None, kind="density", tol=ANALYTIC_TOL):
    """
    Sample a single-mode Gaussian state on a window

    Args:
        state: GaussianState with one mode
        window: Sampling Window (default window if None)
        kind: 'density' for f(q, p) or 'wigner' for W = 2*pi*f
        tol: Declared normalization tolerance

    Returns:
        PhaseGrid of the requested kind
    """
    factor = 2.0 * np.pi if kind == "wigner" else 1.0
    return PhaseGrid.from_function(lambda Q, P: factor * state.density(Q, P), window, kind=kind, tol=tol)
