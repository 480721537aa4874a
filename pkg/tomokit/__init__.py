"""tomokit - symplectic tomography of classical and quantum states"""

__version__ = "1.0.0"
