"""Configuration handling for tomokit"""

import os
import json
import multiprocessing

import psutil

# Phase-space sampling defaults for unit-scale states
DEFAULT_WINDOW = (-8.0, 8.0, -8.0, 8.0)
DEFAULT_SAMPLES = 256

# Tomography
DEFAULT_N_X = 256
# Sampled tomograms keep at least this many X nodes per standard deviation of every frame
X_NODES_PER_SD = 2.0
MAX_N_X = 1 << 15
DEFAULT_ANGLES = 128
# Largest allowed gap between sampled rotation angles before inversion refuses
MAX_ANGLE_GAP = 3.141592653589793 / 8

# Oscillator basis truncation
DEFAULT_DIM = 64
SPECTRUM_DIM = 128
MAX_DIM = int(os.environ.get("TOMOKIT_MAX_DIM", "128"))
# Hermite functions are negligible this far outside the classical turning point
BASIS_MARGIN = 6.0

# Tolerances
ANALYTIC_TOL = 1e-6  # grids sampled from analytic states
LOADED_TOL = 1e-3  # grids read from files
MASS_LOSS_TOL = 1e-4  # scaling / shifting past the window edge
NEGATIVE_FLOOR = 1e-9  # min f >= -NEGATIVE_FLOOR * max f counts as nonnegative
POSITIVITY_TOL = 1e-12  # uncertainty eigenvalue slack, times (1 + trace sigma)
QUANTUM_EIGENVALUE_TOL = 1e-9
HERMITICITY_TOL = 1e-10
LEAKAGE_TOL = 1e-3  # trace deficit before a truncation warning
SYMBOL_LEAKAGE_TOL = 1e-3  # relative L1 error of a reassembled symbol

# Moyal series order for observables that do not decay on the window
STAR_SERIES_ORDER = 6
# Edge mass fraction above which a symbol is treated as an observable
EDGE_FRACTION = 1e-8
# Symbols that are exact polynomials up to this degree quantize through ladder matrices
POLYNOMIAL_DEGREE = 4
POLYNOMIAL_FIT_TOL = 1e-9

# Worker pool defaults: physical cores are the useful unit for numpy work
CPU_COUNT = psutil.cpu_count(logical=False) or multiprocessing.cpu_count()

# Fraction of available memory a single projection chunk may use
CHUNK_MEMORY_FRACTION = 0.05

DEFAULT_CONFIG_PATH = "config.json"


def projection_chunk_rows(dim, n_u, n_rows, bytes_per_value=8):
    """
    Choose how many midpoint rows to project at once

    Args:
        dim: Basis dimension
        n_u: Number of offset samples per row
        n_rows: Total number of midpoint rows
        bytes_per_value: Size of one stored basis value

    Returns:
        Number of rows per chunk, at least 1 and at most n_rows
    """
    budget = psutil.virtual_memory().available * CHUNK_MEMORY_FRACTION
    # two gathered basis tables plus one weighted copy
    per_row = 3 * dim * n_u * bytes_per_value
    return int(max(1, min(n_rows, budget // max(per_row, 1))))


def default_config():
    """
    Build the default configuration dictionary

    Returns:
        Dictionary containing default configuration values
    """
    return {
        "grid": {
            "window": list(DEFAULT_WINDOW),
            "samples": DEFAULT_SAMPLES
        },
        "tomography": {
            "n_x": DEFAULT_N_X,
            "angles": DEFAULT_ANGLES,
            "method": "binning",
            "max_angle_gap": MAX_ANGLE_GAP
        },
        "quantization": {
            "dim": DEFAULT_DIM,
            "max_dim": MAX_DIM,
            "hbar": 1.0
        },
        "tolerances": {
            "analytic": ANALYTIC_TOL,
            "loaded": LOADED_TOL
        },
        "performance": {
            "workers": CPU_COUNT
        },
        "logging": {
            "log_dir": os.environ.get("TOMOKIT_LOG_DIR"),
            "verbosity": "info"
        }
    }


def load_config(config_path=DEFAULT_CONFIG_PATH):
    """
    Load configuration from a JSON file layered over the defaults

    Args:
        config_path: Path to the configuration file (default: "config.json")

    Returns:
        Dictionary containing configuration values
    """
    config = default_config()

    if config_path and os.path.exists(config_path):
        try:
            with open(config_path, "r") as f:
                file_config = json.load(f)

            def update_dict(d, u):
                for k, v in u.items():
                    if isinstance(v, dict) and k in d and isinstance(d[k], dict):
                        d[k] = update_dict(d[k], v)
                    else:
                        d[k] = v
                return d

            config = update_dict(config, file_config)
        except (OSError, ValueError) as e:
            # log isn't configured yet
            print(f"Error loading configuration from {config_path}: {e}")
            print("Using default configuration")

    # The environment cap wins over any file value
    config["quantization"]["max_dim"] = min(int(config["quantization"]["max_dim"]), MAX_DIM)
    config["quantization"]["dim"] = min(int(config["quantization"]["dim"]),
                                        config["quantization"]["max_dim"])
    return config
