"""Scaling transforms and the group versus semigroup classification of scaling parameters"""

from dataclasses import dataclass

import numpy as np

from ..config import MASS_LOSS_TOL
from ..errors import DomainError, ScaleError, TruncationError
from ..utils.logging import log
from .model import ScaleParams
from .symmetry import resampled, sample_at
from .uncertainty import check

# The ħ = 1 vacuum determinant, the reference for the cross boundary
REFERENCE_DETERMINANT = 0.25


def scale_density(g, s, window=None):
    """
    Scaling transform f_s(q, p) = |lq*lp| f(lq*q, lp*p), resampled bilinearly

    Wigner grids use the identical kernel and keep their kind.

    Args:
        g: PhaseGrid of kind 'density' or 'wigner'
        s: Single-mode ScaleParams
        window: Target Window (default: the source window)

    Returns:
        Scaled PhaseGrid with the source integral
    """
    if g.kind == "symbol":
        raise DomainError("scale_density needs a density or Wigner grid")
    if s.n_modes != 1:
        raise ScaleError(f"Grids are single-mode, got {s.n_modes}-mode parameters")
    lq, lp = s.lambda_q[0], s.lambda_p[0]
    if lq == 1.0 and lp == 1.0 and window is None:
        return g

    target = window or g.window
    Q, P = target.mesh()
    values = abs(lq * lp) * sample_at(g, lq * Q, lp * P)
    if window is not None and not window.same_as(g.window):
        # different windows: build on the target, check mass against the source
        moved = g.with_values(values, kind="symbol", window=target)
        return _on_window(g, moved, values, target)
    return resampled(g, values, "scale_density")


def _on_window(g, moved, values, target):
    lost = float(abs(1.0 - np.real(moved.integral() / g.integral())))
    if lost > MASS_LOSS_TOL:
        raise TruncationError(f"scale_density lost {lost:.3e} of the mass on the target window", lost_mass=lost)
    return g.with_values(values * np.real(g.integral() / moved.integral()), window=target)


def scale_moments(m, s):
    """
    Exact moment transform: sigma_qq / lq^2, sigma_pp / lp^2, sigma_qp / (lq*lp), per mode

    Untouched modes carry unit parameters.
    """
    return m.scaled(s)


def scale_tomogram(t, s):
    """
    Tomogram of the scaled state: frames are remapped, X marginals untouched

    Args:
        t: Tomogram
        s: ScaleParams

    Returns:
        Tomogram with omega_s(X, mu, nu) = omega(X, mu/lq, nu/lp)
    """
    # tomography imports phase_space, so resolve at call time
    from ..tomography.tomogram import remap_tomogram
    return remap_tomogram(t, s)


@dataclass(frozen=True)
class ScalingVerdict:
    params: ScaleParams
    classical_admissible: bool
    quantum_admissible_for_state: bool
    universal_quantum_admissible: bool
    margin: float
    mode_margins: tuple = ()

    def as_dict(self):
        return {
            "lambda_q": list(self.params.lambda_q),
            "lambda_p": list(self.params.lambda_p),
            "classical_admissible": self.classical_admissible,
            "quantum_admissible_for_state": self.quantum_admissible_for_state,
            "universal_quantum_admissible": self.universal_quantum_admissible,
            "margin": self.margin,
            "mode_margins": list(self.mode_margins),
        }


def universal_admissible(s, slack=1e-12):
    """Every uncertainty-respecting state stays admissible iff |lq*lp| <= 1 on each mode"""
    return bool(np.all(s.products() <= 1.0 + slack))


def classify_scaling(m, s, hbar):
    """
    Classical and quantum admissibility of scaling parameters for a state

    Args:
        m: Moments of the state
        s: ScaleParams
        hbar: Planck parameter

    Returns:
        ScalingVerdict; margin is the scaled per-mode determinant minus hbar^2/4 (minimum over modes)
    """
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    scaled = scale_moments(m, s)
    verdict = check(scaled, hbar)
    return ScalingVerdict(
        params=s,
        classical_admissible=all(v != 0.0 for v in s.lambda_q + s.lambda_p),
        quantum_admissible_for_state=verdict.passes,
        universal_quantum_admissible=universal_admissible(s),
        margin=verdict.sr_margin,
        mode_margins=verdict.mode_margins,
    )


@dataclass(frozen=True, eq=False)
class CrossBoundary:
    """
    Boundary of the quantum cross in dilation coordinates kappa = 1/lambda

    A state with reference determinant d_ref scaled by (lq, lp) has determinant
    d_ref * (kq*kp)^2, so admissibility is |kq*kp| >= constant = hbar / (2 sqrt(d_ref)).
    The forbidden region hugs the axes; classically it degenerates to the axes themselves.
    """

    hbar: float
    constant: float
    branches: tuple
    classical_axes: tuple

    @property
    def thickness(self):
        """Distance of each branch from its axis at unit dilation of the other variable"""
        return self.constant

    def forbidden(self, kappa_q, kappa_p):
        return np.abs(np.asarray(kappa_q) * np.asarray(kappa_p)) < self.constant

    def as_dict(self):
        return {
            "hbar": self.hbar,
            "constant": self.constant,
            "thickness": self.thickness,
            "branches": [b.tolist() for b in self.branches],
        }


def quantum_cross(hbar, samples, extent=10.0, reference_determinant=REFERENCE_DETERMINANT):
    """
    Sample the four hyperbola branches bounding the quantum cross

    Args:
        hbar: Planck parameter
        samples: Points per branch (at least 2)
        extent: Largest dilation sampled along either axis
        reference_determinant: Determinant of the reference state at hbar = 1 units

    Returns:
        CrossBoundary
    """
    if samples < 2:
        raise DomainError(f"Need at least 2 samples per branch, got {samples}")
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    constant = hbar / (2.0 * np.sqrt(reference_determinant))
    kq = np.geomspace(constant / extent, extent, samples)
    branches = []
    for sq, sp in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
        branches.append(np.column_stack([sq * kq, sp * constant / kq]))
    axis = np.linspace(-extent, extent, 2 * samples + 1)
    zeros = np.zeros_like(axis)
    axes = (np.column_stack([axis, zeros]), np.column_stack([zeros, axis]))
    log.debug(f"Quantum cross at hbar={hbar}: boundary constant {constant:.6g}")
    return CrossBoundary(float(hbar), float(constant), tuple(branches), axes)
