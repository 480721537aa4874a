"""Witness scans and scaling reports for tomokit"""

import concurrent.futures
import itertools
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from ..config import CPU_COUNT, DEFAULT_DIM
from ..errors import DomainError
from ..phase_space.model import FockState, GaussianState
from ..phase_space.scaling import classify_scaling, universal_admissible
from ..utils.logging import log
from .classify import classify_state


@dataclass(frozen=True)
class WitnessRow:
    """One hbar of the non-limit scan"""

    hbar: float
    classical_witness: object
    quantum_witness: object

    @property
    def classical_verified(self):
        return self.classical_witness.quadrant == "classical-only"

    @property
    def quantum_verified(self):
        return self.quantum_witness.quadrant == "quantum-only"

    @property
    def sets_differ(self):
        return self.classical_verified and self.quantum_verified

    def as_dict(self):
        return {
            "hbar": self.hbar,
            "classical_witness": self.classical_witness.as_dict(),
            "quantum_witness": self.quantum_witness.as_dict(),
            "classical_verified": self.classical_verified,
            "quantum_verified": self.quantum_verified,
            "sets_differ": self.sets_differ,
        }


@dataclass(frozen=True)
class NonlimitReport:
    rows: tuple

    @property
    def sets_differ_everywhere(self):
        return all(row.sets_differ for row in self.rows)

    def as_dict(self):
        return {
            "sets_differ_everywhere": self.sets_differ_everywhere,
            "rows": [row.as_dict() for row in self.rows],
        }


def classical_witness(hbar):
    """Isotropic Gaussian with determinant hbar^2/8, below the hbar^2/4 bound"""
    return GaussianState.isotropic(hbar / (2.0 * math.sqrt(2.0)))


def quantum_witness(hbar):
    return FockState(1, hbar)


def _witness_row(hbar, dim, window):
    return WitnessRow(
        float(hbar),
        classify_state(classical_witness(hbar), hbar, dim, window=window),
        classify_state(quantum_witness(hbar), hbar, dim, window=window),
    )


def nonlimit_demonstration(hbars, dim=DEFAULT_DIM, workers=None, progress=False, window=None):
    """
    Exhibit a classical-only and a quantum-only state at every hbar

    Args:
        hbars: Nonempty, descending sequence of positive Planck parameters
        dim: Basis truncation passed to the classifier
        workers: Worker threads (default: physical cores)
        progress: Show a progress bar
        window: Natural-units window for the quantum witness (default window if None)

    Returns:
        NonlimitReport with one WitnessRow per hbar
    """
    hbars = [float(h) for h in hbars]
    if not hbars:
        raise DomainError("hbar scan needs at least one value")
    if any(not h > 0 for h in hbars):
        raise DomainError(f"hbar values must be positive, got {hbars}")
    if any(b >= a for a, b in zip(hbars, hbars[1:])):
        raise DomainError(f"hbar values must be strictly descending, got {hbars}")

    max_workers = workers or CPU_COUNT
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        rows = executor.map(lambda h: _witness_row(h, dim, window), hbars)
        rows = tuple(tqdm(rows, total=len(hbars), desc="hbar scan", disable=not progress))

    report = NonlimitReport(rows)
    for row in rows:
        if not row.sets_differ:
            log.warning(f"Witness check failed at hbar={row.hbar}: classical {row.classical_witness.quadrant}, "
                        f"quantum {row.quantum_witness.quadrant}")
    log.info(f"hbar scan over {len(rows)} values: sets differ everywhere = {report.sets_differ_everywhere}")
    return report


@dataclass(frozen=True)
class ScalingReport:
    hbar: float
    rows: tuple
    closure_pairs: int
    closure_failures: tuple

    @property
    def inside_cross(self):
        """Indices of samples that make the state quantum-inadmissible"""
        return tuple(i for i, row in enumerate(self.rows) if not row.quantum_admissible_for_state)

    @property
    def closure_holds(self):
        return not self.closure_failures

    def summary(self):
        return {
            "samples": len(self.rows),
            "classical_admissible": sum(row.classical_admissible for row in self.rows),
            "quantum_admissible_for_state": sum(row.quantum_admissible_for_state for row in self.rows),
            "universal_quantum_admissible": sum(row.universal_quantum_admissible for row in self.rows),
            "inside_cross": len(self.inside_cross),
            "closure_pairs": self.closure_pairs,
            "closure_holds": self.closure_holds,
        }

    def as_dict(self):
        return {
            "hbar": self.hbar,
            "summary": self.summary(),
            "rows": [row.as_dict() for row in self.rows],
            "closure_failures": [[list(a.lambda_q), list(a.lambda_p), list(b.lambda_q), list(b.lambda_p)]
                                 for a, b in self.closure_failures],
        }


def _closure_candidates(admissible, max_pairs, seed):
    pairs = list(itertools.combinations_with_replacement(admissible, 2))
    if max_pairs is None or len(pairs) <= max_pairs:
        return pairs
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pairs), size=max_pairs, replace=False)
    return [pairs[i] for i in sorted(chosen)]


def group_vs_semigroup_report(m, hbar, sample_params, max_pairs=None, seed=0):
    """
    Classical group against quantum semigroup on sample scaling parameters

    Args:
        m: Moments of the reference state
        hbar: Planck parameter
        sample_params: Sequence of ScaleParams
        max_pairs: Cap on composed pairs checked for closure (sampled with seed)
        seed: Seed for the pair sample

    Returns:
        ScalingReport
    """
    rows = tuple(classify_scaling(m, s, hbar) for s in sample_params)
    admissible = [row.params for row in rows if row.universal_quantum_admissible]
    pairs = _closure_candidates(admissible, max_pairs, seed)
    failures = tuple((a, b) for a, b in pairs if not universal_admissible(a.compose(b)))

    report = ScalingReport(float(hbar), rows, len(pairs), failures)
    if failures:
        log.warning(f"Semigroup closure failed for {len(failures)} of {len(pairs)} pairs")
    log.info(f"Scaling report: {len(rows)} samples, {len(report.inside_cross)} inside the quantum cross")
    return report
