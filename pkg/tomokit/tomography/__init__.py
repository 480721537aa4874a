"""Tomographic transforms for tomokit"""

from .tomogram import (Tomogram, GaussianTomogram, FockTomogram, ScaledTomogram, SampledTomogram,
                       tomogram_of_grid, tomogram_of_gaussian, uniform_frames, reflect_frames)
from .inverse import invert_tomogram, l1_distance
from .analysis import TomogramCheck, tomogram_moments, check_tomogram
