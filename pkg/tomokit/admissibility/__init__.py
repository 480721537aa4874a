"""Classical and quantum admissibility for tomokit"""

from .classify import QUADRANTS, AdmissibilityReport, classify_state, gaussian_spectrum
from .hybrid import HybridState, hybrid_factorized
from .reports import (NonlimitReport, ScalingReport, WitnessRow, nonlimit_demonstration,
                      group_vs_semigroup_report)
