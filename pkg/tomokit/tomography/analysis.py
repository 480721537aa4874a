"""Moment extraction and consistency checks for tomograms"""

from dataclasses import dataclass, field

import numpy as np

from ..config import ANALYTIC_TOL, NEGATIVE_FLOOR
from ..errors import FrameError
from ..phase_space.model import Frame, Moments
from ..utils.logging import log
from .tomogram import GaussianTomogram, SampledTomogram, uniform_frames

HOMOGENEITY_FACTORS = (2.0, -2.0, 0.5, -0.5)

Q_FRAME = Frame(1.0, 0.0)
P_FRAME = Frame(0.0, 1.0)
DIAGONAL_FRAME = Frame(1.0, 1.0)


def _multimode_moments(t):
    # covariances of per-mode variables at mixed frames give every sigma entry
    n = t.n_modes
    sigma = np.zeros((2 * n, 2 * n))
    _, cov_q = t.joint_moments([Q_FRAME] * n)
    _, cov_p = t.joint_moments([P_FRAME] * n)
    mean_q, _ = t.joint_moments([Q_FRAME] * n)
    mean_p, _ = t.joint_moments([P_FRAME] * n)
    sigma[:n, :n] = cov_q
    sigma[n:, n:] = cov_p
    for a in range(n):
        for b in range(n):
            if a == b:
                _, cov_d = t.joint_moments([DIAGONAL_FRAME if s == a else Q_FRAME for s in range(n)])
                value = (cov_d[a, a] - cov_q[a, a] - cov_p[a, a]) / 2.0
            else:
                _, cov_m = t.joint_moments([P_FRAME if s == b else Q_FRAME for s in range(n)])
                value = cov_m[a, b]
            sigma[a, n + b] = sigma[n + b, a] = value
    return Moments(np.concatenate([mean_q, mean_p]), sigma)


def tomogram_moments(t):
    """
    Recover means and dispersion matrix from variances at three frames

    sigma_qq = var(1,0), sigma_pp = var(0,1),
    sigma_qp = [var(1,1) - var(1,0) - var(0,1)] / 2

    Args:
        t: Tomogram (sampled tomograms must hold multiples of (1,0), (0,1) and (1,1))

    Returns:
        Moments
    """
    if isinstance(t, GaussianTomogram) and t.n_modes > 1:
        return _multimode_moments(t)
    if isinstance(t, SampledTomogram):
        missing = [f.as_tuple() for f in (Q_FRAME, P_FRAME, DIAGONAL_FRAME) if t.find(f) is None]
        if missing:
            raise FrameError(f"Sampled tomogram lacks frames {missing} needed for moments")

    var_q = t.var_x(Q_FRAME)
    var_p = t.var_x(P_FRAME)
    var_d = t.var_x(DIAGONAL_FRAME)
    sigma_qp = (var_d - var_q - var_p) / 2.0
    mean = [t.mean_x(Q_FRAME), t.mean_x(P_FRAME)]
    return Moments(mean, [[var_q, sigma_qp], [sigma_qp, var_p]])


@dataclass(frozen=True)
class TomogramCheck:
    """Findings of check_tomogram; residuals are absolute"""

    tol: float
    normalization_residuals: tuple
    homogeneity_residuals: tuple
    negative_values: tuple
    flagged: tuple = field(default_factory=tuple)

    @property
    def passes(self):
        return not self.flagged

    @property
    def max_normalization_residual(self):
        return max(r for _, r in self.normalization_residuals)

    @property
    def max_homogeneity_residual(self):
        return max((r for *_, r in self.homogeneity_residuals), default=0.0)

    def as_dict(self):
        return {
            "passes": self.passes,
            "tol": self.tol,
            "normalization_residuals": [{"frame": list(f), "residual": r} for f, r in self.normalization_residuals],
            "homogeneity_residuals": [{"frame": list(f), "factor": c, "residual": r}
                                      for f, c, r in self.homogeneity_residuals],
            "negative_values": [{"frame": list(f), "min_value": v} for f, v in self.negative_values],
            "flagged": list(self.flagged),
        }


def _sampled_findings(t):
    x = t.x
    norms = [(f.as_tuple(), float(r)) for f, r in zip(t.frames, t.normalization_residuals())]

    homogeneity = []
    for k, f in enumerate(t.frames):
        for j in range(k + 1, len(t.frames)):
            other = t.frames[j]
            if abs(other.mu * f.nu - other.nu * f.mu) > 1e-12 * other.norm * f.norm:
                continue
            c = (other.mu * f.mu + other.nu * f.nu) / f.norm ** 2
            # omega(X, cF)|c| against omega(X/c, F) on the stored X nodes of the scaled frame
            expected = t.row_pdf(k, x / c)
            residual = float(np.max(np.abs(t.values[j] * abs(c) - expected)))
            homogeneity.append((other.as_tuple(), c, residual))

    negatives = []
    for f, row in zip(t.frames, t.values):
        if row.min() < -NEGATIVE_FLOOR * max(row.max(), 0.0):
            negatives.append((f.as_tuple(), float(row.min())))
    return norms, homogeneity, negatives


def _analytic_findings(t, frames, factors):
    norms = [(f.as_tuple(), abs(t.normalization(f) - 1.0)) for f in frames]
    homogeneity = []
    for f in frames:
        lo, hi = t.x_window(f)
        x = np.linspace(lo, hi, 257)
        reference = t.pdf(x, f)
        for c in factors:
            scaled = t.pdf(c * x, f.scaled(c)) * abs(c)
            homogeneity.append((f.scaled(c).as_tuple(), c, float(np.max(np.abs(scaled - reference)))))
    negatives = []
    for f in frames:
        lo, hi = t.x_window(f)
        values = t.pdf(np.linspace(lo, hi, 1025), f)
        if values.min() < -NEGATIVE_FLOOR * max(values.max(), 0.0):
            negatives.append((f.as_tuple(), float(values.min())))
    return norms, homogeneity, negatives


def check_tomogram(t, tol=None, frames=None, factors=HOMOGENEITY_FACTORS):
    """
    Normalization, homogeneity and nonnegativity findings for a tomogram

    Args:
        t: Tomogram
        tol: Residual threshold for flagging (default: the tomogram's own tolerance, else 1e-6)
        frames: Frames to test for analytic tomograms (default: 8 unit frames)
        factors: Homogeneity factors for analytic tomograms; sampled tomograms use
            the frame pairs they hold that differ by a scalar

    Returns:
        TomogramCheck
    """
    tol = tol if tol is not None else getattr(t, "tol", ANALYTIC_TOL)
    if isinstance(t, SampledTomogram):
        norms, homogeneity, negatives = _sampled_findings(t)
    else:
        frames = frames or uniform_frames(8)
        norms, homogeneity, negatives = _analytic_findings(t, frames, factors)

    flagged = []
    for f, r in norms:
        if r > tol:
            flagged.append(f"normalization residual {r:.3e} at frame {f}")
    for f, c, r in homogeneity:
        if r > tol:
            flagged.append(f"homogeneity residual {r:.3e} at frame {f} (factor {c:g})")
    for f, v in negatives:
        flagged.append(f"negative value {v:.3e} at frame {f}")

    for message in flagged:
        log.warning(f"Tomogram check: {message}")
    return TomogramCheck(tol, tuple(norms), tuple(homogeneity), tuple(negatives), tuple(flagged))
