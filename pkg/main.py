#!/usr/bin/env python3
"""
tomokit: symplectic tomography of classical and quantum states
- Forward and inverse tomographic transforms on phase-space grids
- Scaling transforms, the classical group and the quantum semigroup
- Uncertainty-relation checks for dispersion matrices
- Weyl quantization with Moyal and commutative star products
- Classification of states as classical-only, quantum-only, both or neither
"""

import os
import sys

# Make the tomokit package importable when running from a checkout
parent_dir = os.path.dirname(os.path.abspath(__file__))
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

try:
    from tomokit.cli import main
except ImportError as e:
    print(f"Error importing tomokit modules: {e}")
    print(f"Current sys.path: {sys.path}")
    sys.exit(1)

if __name__ == "__main__":
    sys.exit(main())
