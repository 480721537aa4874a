"""Phase-space states, symmetries, scaling and uncertainty for tomokit"""

from .model import (Window, PhaseGrid, GaussianState, FockState, Frame, ScaleParams, Moments,
                    frame_from_polar, gaussian_grid)
from .symmetry import moments_of_grid, reflect_time, reflect_parity, reflect_full, shift
from .uncertainty import (UncertaintyMatrix, UncertaintyVerdict, build_matrix, check, sr_bound,
                          symplectic_eigenvalues, rescale_hbar)
from .scaling import (ScalingVerdict, CrossBoundary, scale_density, scale_moments, scale_tomogram,
                      classify_scaling, quantum_cross)
