"""Uncertainty-relation positivity checks for dispersion matrices"""

from dataclasses import dataclass

import numpy as np

from ..config import POSITIVITY_TOL
from ..errors import CorrelationError, DomainError
from .model import Moments


def symplectic_form(n_modes):
    """Standard antisymmetric form J = [[0, I], [-I, 0]] in q_1..q_n, p_1..p_n ordering"""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True, eq=False)
class UncertaintyMatrix:
    n_modes: int
    sigma: np.ndarray
    capital_sigma: np.ndarray
    hbar: float

    def matrix(self):
        """sigma + Sigma as a complex Hermitian matrix"""
        return self.sigma + self.capital_sigma


@dataclass(frozen=True)
class UncertaintyVerdict:
    passes: bool
    min_eigenvalue: float
    sr_margin: float
    robertson_margin: float
    r: float
    hbar: float
    mode_margins: tuple = ()

    def as_dict(self):
        return {
            "passes": self.passes,
            "min_eigenvalue": self.min_eigenvalue,
            "sr_margin": self.sr_margin,
            "robertson_margin": self.robertson_margin,
            "r": self.r,
            "hbar": self.hbar,
            "mode_margins": list(self.mode_margins),
        }


def _check_hbar(hbar):
    if not np.isfinite(hbar) or hbar < 0:
        raise DomainError(f"hbar must be a nonnegative finite number, got {hbar}")


def build_matrix(m, hbar):
    """
    Build the uncertainty matrix sigma + (i*hbar/2)*J

    Args:
        m: Moments of the state
        hbar: Planck parameter; 0 gives the classical test

    Returns:
        UncertaintyMatrix
    """
    _check_hbar(hbar)
    n = m.n_modes
    capital_sigma = 0.5j * hbar * symplectic_form(n)
    return UncertaintyMatrix(n, np.array(m.sigma), capital_sigma, float(hbar))


def _mode_margins(m, hbar):
    margins = []
    for s in range(m.n_modes):
        block = m.mode_block(s)
        margins.append(float(block[0, 0] * block[1, 1] - block[0, 1] ** 2 - hbar ** 2 / 4.0))
    return tuple(margins)


def check(m, hbar, tol=None):
    """
    Full positivity test of the uncertainty matrix

    Args:
        m: Moments of the state
        hbar: Planck parameter (0 allowed)
        tol: Eigenvalue slack; default 1e-12 * (1 + trace sigma)

    Returns:
        UncertaintyVerdict; the eigenvalue test is authoritative, the margins are evidence
    """
    um = build_matrix(m, hbar)
    eigenvalues = np.linalg.eigvalsh(um.matrix())
    min_eigenvalue = float(eigenvalues[0])
    slack = POSITIVITY_TOL * (1.0 + abs(m.t)) if tol is None else tol

    mode_margins = _mode_margins(m, hbar)
    robertson_margin = float(m.d - (hbar / 2.0) ** (2 * m.n_modes))

    sqq, spp, sqp = m.mode_block(0)[0, 0], m.mode_block(0)[1, 1], m.mode_block(0)[0, 1]
    # r is undefined for a vanishing variance; report 0
    r = float(sqp / np.sqrt(sqq * spp)) if sqq * spp > 0 else 0.0

    return UncertaintyVerdict(
        passes=bool(min_eigenvalue >= -slack),
        min_eigenvalue=min_eigenvalue,
        sr_margin=min(mode_margins),
        robertson_margin=robertson_margin,
        r=r,
        hbar=float(hbar),
        mode_margins=mode_margins,
    )


def sr_bound(sigma_qq, sigma_pp, sigma_qp, hbar):
    """
    Schrodinger-Robertson relation in correlation form

    Args:
        sigma_qq: Position variance
        sigma_pp: Momentum variance
        sigma_qp: Position-momentum covariance
        hbar: Planck parameter

    Returns:
        sigma_qq * sigma_pp - hbar^2 / (4 (1 - r^2)); nonnegative when the relation holds
    """
    _check_hbar(hbar)
    product = sigma_qq * sigma_pp
    if not product > 0:
        raise DomainError(f"Correlation form needs positive variances, got {sigma_qq}, {sigma_pp}")
    r = sigma_qp / np.sqrt(product)
    if abs(r) >= 1.0:
        raise CorrelationError(f"Correlation coefficient |r| = {abs(r):.6f} is not below 1")
    return float(product - hbar ** 2 / (4.0 * (1.0 - r * r)))


def symplectic_eigenvalues(sigma):
    """
    Williamson invariants of a dispersion matrix

    Args:
        sigma: Real symmetric 2n x 2n matrix

    Returns:
        Sorted array of n symplectic eigenvalues (moduli of the eigenvalues of i*J*sigma)
    """
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ sigma)))
    return moduli[::2]


def rescale_hbar(m, epsilon):
    """
    Realize hbar -> epsilon*hbar on moments by rescaling momenta

    check(rescale_hbar(m, eps), abs(eps) * hbar) agrees with check(m, hbar);
    epsilon = -1 is time reversal.
    """
    if epsilon == 0 or not np.isfinite(epsilon):
        raise DomainError(f"epsilon must be finite and nonzero, got {epsilon}")
    n = m.n_modes
    factors = np.concatenate([np.ones(n), np.full(n, float(epsilon))])
    return Moments(m.mean * factors, m.sigma * np.outer(factors, factors))
