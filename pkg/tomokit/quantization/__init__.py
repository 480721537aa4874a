"""Weyl quantization, spectra and star products for tomokit"""

from .basis import hermite_functions, position_matrix, momentum_matrix, wavefunction
from .weyl import (OperatorMatrix, PositionKernel, symbol_to_matrix, matrix_to_symbol, wigner_of_density,
                   positivity_functional, position_kernel)
from .spectrum import Spectrum, spectral_decompose
from .star import (KernelSpec, moyal_kernel, star_kernel_at, star_moyal, star_classical,
                   star_classical_kernel)
