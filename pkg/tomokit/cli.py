"""Command-line interface for tomokit"""

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from .config import load_config
from .errors import (AdmissibilityError, CorrelationError, CoverageError, DensityError, DomainError, FrameError,
                     HermiticityError, InputFormatError, NormalizationError, ScaleError, TomokitError,
                     TruncationError)
from .utils.logging import setup_logging, flush_logs, log
from .utils.file_ops import (format_json_report, input_digest, read_frames, read_phasegrid, read_tomogram,
                             write_json_report, write_phasegrid, write_tomogram, atomic_write_text)
from .phase_space.model import FockState, GaussianState, ScaleParams, Window, frame_from_polar
from .phase_space.symmetry import moments_of_grid
from .tomography.tomogram import FockTomogram, GaussianTomogram, tomogram_of_grid, uniform_frames
from .tomography.inverse import invert_tomogram, l1_distance
from .admissibility.classify import classify_state
from .admissibility.reports import group_vs_semigroup_report, nonlimit_demonstration

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

# Errors caused by what the user passed in, as opposed to numeric findings
INPUT_ERRORS = (InputFormatError, DomainError, FrameError, ScaleError, CorrelationError, OSError)
NUMERIC_ERRORS = (CoverageError, NormalizationError, TruncationError, DensityError, HermiticityError,
                  AdmissibilityError)


class NumericEscalation(TomokitError):
    """A numeric warning escalated to a failure by --strict"""


@dataclass(frozen=True)
class StateSpec:
    """Exactly one of a Gaussian (mean, sigma), a Fock level, or a phasegrid file"""

    kind: str
    hbar: float = 1.0
    mean: tuple = (0.0, 0.0)
    sigma: tuple = None
    n: int = None
    path: str = None
    grid_kind: str = "density"

    def __post_init__(self):
        if self.kind not in ("gaussian", "fock", "grid-file"):
            raise InputFormatError(f"Unknown state kind '{self.kind}'")
        if not self.hbar > 0:
            raise InputFormatError(f"--hbar must be positive, got {self.hbar}")
        if self.kind == "fock" and self.n is None:
            raise InputFormatError("A fock state needs --level")
        if self.kind == "grid-file" and not self.path:
            raise InputFormatError("A grid-file state needs --grid PATH")
        if self.kind != "grid-file" and self.path:
            raise InputFormatError("--grid is only valid with --state grid-file")

    @classmethod
    def from_args(cls, args, hbar):
        return cls(args.state, hbar, tuple(args.mean), tuple(args.sigma) if args.sigma else None,
                   args.level, args.grid, args.grid_kind)

    def paths(self):
        return [self.path] if self.path else []

    def gaussian(self):
        if self.sigma is None:
            return GaussianState.vacuum(hbar=self.hbar)
        sqq, spp, sqp = self.sigma
        return GaussianState.single_mode(sqq, spp, sqp, *self.mean)

    def build(self, tol):
        """GaussianState, FockState or PhaseGrid"""
        if self.kind == "gaussian":
            return self.gaussian()
        if self.kind == "fock":
            return FockState(self.n, self.hbar)
        return read_phasegrid(self.path, kind=self.grid_kind, tol=tol)


@dataclass
class RunReport:
    """What a command did, in a deterministic, machine-readable form"""

    command: list
    digest: str
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    status: int = EXIT_OK

    def as_dict(self):
        return {
            "command": self.command,
            "input_digest": self.digest,
            "status": self.status,
            "results": self.results,
            "warnings": self.warnings,
        }


def add_state_arguments(parser):
    parser.add_argument("--state", choices=["gaussian", "fock", "grid-file"], default="gaussian",
                        help="State kind (default: gaussian)")
    parser.add_argument("--mean", nargs=2, type=float, default=[0.0, 0.0], metavar=("Q", "P"),
                        help="Gaussian mean (default: 0 0)")
    parser.add_argument("--sigma", nargs=3, type=float, metavar=("SQQ", "SPP", "SQP"),
                        help="Gaussian dispersion entries (default: vacuum at --hbar)")
    parser.add_argument("--level", type=int, help="Fock level n")
    parser.add_argument("--grid", help="phasegrid v1 file")
    parser.add_argument("--grid-kind", choices=["density", "wigner"], default="density",
                        help="How to read the grid file values (default: density)")


def parse_arguments(argv=None):
    """
    Parse command-line arguments

    Returns:
        Parsed arguments object
    """
    parser = argparse.ArgumentParser(prog="tomokit",
                                     description="tomokit: symplectic tomography of classical and quantum states")

    parser.add_argument("--config", default="config.json", help="Path to configuration file (default: config.json)")
    parser.add_argument("--hbar", type=float, help="Planck parameter (overrides config file)")
    parser.add_argument("--dim", type=int, help="Oscillator basis truncation (overrides config file)")
    parser.add_argument("--window", nargs=4, type=float, metavar=("QMIN", "QMAX", "PMIN", "PMAX"),
                        help="Phase-space window (overrides config file)")
    parser.add_argument("--tol", type=float, help="Normalization tolerance of loaded inputs (overrides config file)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled checks (default: 0)")
    parser.add_argument("--log-level", choices=["debug", "info", "warning", "error", "critical"],
                        help="Logging level (overrides config file)")
    parser.add_argument("--log-dir", help="Directory for log files (overrides config file)")
    parser.add_argument("--strict", action="store_true", help="Treat numeric warnings as failures (exit 3)")
    parser.add_argument("--report", help="Write the run report as JSON to this path")

    commands = parser.add_subparsers(dest="command", required=True)

    tomogram = commands.add_parser("tomogram", help="Forward tomographic transform")
    add_state_arguments(tomogram)
    tomogram.add_argument("--frames", help="Frame list file, one 'mu nu' per line")
    tomogram.add_argument("--angles", type=int, help="Number of uniform angles in [0, pi) (overrides config file)")
    tomogram.add_argument("--lam", nargs="+", type=float, default=[0.0], metavar="LAMBDA",
                          help="Scaling parameter of generated frames: one value, or START STOP N (default: 0)")
    tomogram.add_argument("--n-x", type=int, help="Minimum samples on the shared X grid (overrides config file)")
    tomogram.add_argument("--method", choices=["binning", "fourier"], help="Grid projection method")
    tomogram.add_argument("--out", required=True, help="Output tomogram CSV")

    invert = commands.add_parser("invert", help="Inverse tomographic transform")
    add_state_arguments(invert)
    invert.add_argument("--tomo", help="Tomogram CSV (instead of a state spec)")
    invert.add_argument("--kind", choices=["wigner", "density"], default="wigner",
                        help="Reconstruction kind (default: wigner)")
    invert.add_argument("--reference", help="phasegrid v1 file to measure L1 error against")
    invert.add_argument("--reference-kind", choices=["density", "wigner"], default="density")
    invert.add_argument("--out", required=True, help="Output phasegrid v1 file")

    classify = commands.add_parser("classify", help="Classical and quantum admissibility")
    add_state_arguments(classify)
    classify.add_argument("--json", help="Also write the admissibility report as JSON ('-' for stdout)")

    scan = commands.add_parser("scan", help="hbar witness scan or quantum-cross scan")
    scan.add_argument("kind", choices=["hbar-scan", "cross-scan"])
    add_state_arguments(scan)
    scan.add_argument("--hbars", nargs="+", type=float, help="Descending hbar values for hbar-scan")
    scan.add_argument("--lq", nargs=3, type=float, metavar=("START", "STOP", "N"), help="lambda_q range")
    scan.add_argument("--lp", nargs=3, type=float, metavar=("START", "STOP", "N"), help="lambda_p range")
    scan.add_argument("--max-pairs", type=int, default=2000, help="Composed pairs checked for closure")
    scan.add_argument("--out", help="Write CSV rows here instead of stdout")

    return parser.parse_args(argv)


def apply_overrides(config, args):
    """Command-line flags win over the JSON config"""
    if args.hbar is not None:
        config["quantization"]["hbar"] = args.hbar
    if args.dim is not None:
        # TOMOKIT_MAX_DIM caps the flag too
        config["quantization"]["dim"] = min(args.dim, config["quantization"]["max_dim"])
    if args.window:
        config["grid"]["window"] = list(args.window)
    if args.tol is not None:
        config["tolerances"]["loaded"] = args.tol
    if args.log_level:
        config["logging"]["verbosity"] = args.log_level
    if args.log_dir:
        config["logging"]["log_dir"] = args.log_dir
    return config


def config_window(config):
    q_min, q_max, p_min, p_max = config["grid"]["window"]
    n = int(config["grid"]["samples"])
    return Window(q_min, q_max, p_min, p_max, n, n)


def _emit(text, out=None):
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _frame_lambdas(values):
    if len(values) == 1:
        return values
    if len(values) == 3:
        return _scan_range(values, "--lam")
    raise InputFormatError(f"--lam takes one value or START STOP N, got {len(values)} values")


def cmd_tomogram(args, config, report):
    spec = StateSpec.from_args(args, config["quantization"]["hbar"])
    if args.frames:
        frames = read_frames(args.frames)
    else:
        n_angles = args.angles or config["tomography"]["angles"]
        frames = [f for lam in _frame_lambdas(args.lam) for f in uniform_frames(n_angles, lam)]
    n_x = args.n_x or config["tomography"]["n_x"]

    state = spec.build(config["tolerances"]["loaded"])
    if spec.kind == "gaussian":
        t = GaussianTomogram(state).sample(frames, n_x)
    elif spec.kind == "fock":
        t = FockTomogram(state.n, state.hbar).sample(frames, n_x)
    else:
        method = args.method or config["tomography"]["method"]
        t = tomogram_of_grid(state, frames, n_x, method=method, workers=config["performance"]["workers"])

    write_tomogram(args.out, t)
    residuals = t.normalization_residuals()
    lines = [f"frame {f.mu:.17g} {f.nu:.17g} residual {r:.3e}" for f, r in zip(t.frames, residuals)]
    sys.stdout.write("\n".join(lines) + "\n")

    limit = max(t.tol, config["tolerances"]["analytic"])
    for f, r in zip(t.frames, residuals):
        if r > limit:
            report.warnings.append(f"normalization residual {r:.3e} at frame ({f.mu:g}, {f.nu:g})")
    report.results = {
        "out": args.out,
        "frames": len(t.frames),
        "n_x": t.n_x,
        "x_range": [t.x_min, t.x_max],
        "normalization_residuals": [float(r) for r in residuals],
    }


def cmd_invert(args, config, report):
    window = config_window(config)
    exact = None
    if args.tomo:
        t = read_tomogram(args.tomo, tol=config["tolerances"]["loaded"])
    else:
        spec = StateSpec.from_args(args, config["quantization"]["hbar"])
        if spec.kind == "grid-file":
            raise InputFormatError("invert takes --tomo or an analytic state, not a grid file")
        state = spec.build(config["tolerances"]["loaded"])
        exact = state.moments()
        t = GaussianTomogram(state) if spec.kind == "gaussian" else FockTomogram(state.n, state.hbar)

    g = invert_tomogram(t, window, kind=args.kind, max_gap=config["tomography"]["max_angle_gap"],
                        workers=config["performance"]["workers"])
    write_phasegrid(args.out, g)

    m = exact if exact is not None else moments_of_grid(g)
    report.results = {
        "out": args.out,
        "kind": g.kind,
        "mass": g.mass(),
        "min_value": float(g.values.min()),
        "moments_exact": exact is not None,
        "mean": m.mean.tolist(),
        "sigma": m.sigma.tolist(),
    }
    if args.reference:
        reference = read_phasegrid(args.reference, kind=args.reference_kind, tol=config["tolerances"]["loaded"])
        report.results["l1_error"] = l1_distance(g, reference)
    sys.stdout.write("".join(f"{k}: {v}\n" for k, v in report.results.items()))


def format_key_values(d, prefix=""):
    lines = []
    for key, value in d.items():
        if isinstance(value, dict):
            lines.extend(format_key_values(value, f"{prefix}{key}."))
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def cmd_classify(args, config, report):
    hbar = config["quantization"]["hbar"]
    spec = StateSpec.from_args(args, hbar)
    state = spec.build(config["tolerances"]["loaded"])
    verdict = classify_state(state, hbar, dim=config["quantization"]["dim"], window=config_window(config))

    sys.stdout.write("\n".join(format_key_values(verdict.as_dict())) + "\n")
    if args.json == "-":
        sys.stdout.write(format_json_report(verdict.as_dict()))
    elif args.json:
        write_json_report(args.json, verdict.as_dict())
    report.results = verdict.as_dict()
    report.warnings.extend(verdict.warnings)


def _scan_range(values, name):
    start, stop, count = values
    if count != int(count) or int(count) < 1:
        raise InputFormatError(f"{name} needs a positive integer sample count, got {count}")
    if int(count) > 1 and start == stop:
        raise InputFormatError(f"{name} range is empty: start equals stop")
    return np.linspace(start, stop, int(count))


def cmd_scan(args, config, report):
    hbar = config["quantization"]["hbar"]
    if args.kind == "hbar-scan":
        if not args.hbars:
            raise InputFormatError("hbar-scan needs --hbars")
        result = nonlimit_demonstration(args.hbars, dim=config["quantization"]["dim"],
                                        workers=config["performance"]["workers"], progress=sys.stderr.isatty(),
                                        window=config_window(config))
        rows = ["hbar,classical_quadrant,classical_min_eigenvalue,quantum_quadrant,quantum_min_symbol,sets_differ"]
        for row in result.rows:
            rows.append(f"{row.hbar:.17g},{row.classical_witness.quadrant},"
                        f"{row.classical_witness.min_eigenvalue:.17g},{row.quantum_witness.quadrant},"
                        f"{row.quantum_witness.min_symbol_value:.17g},{str(row.sets_differ).lower()}")
            if not row.sets_differ:
                report.warnings.append(f"witnesses not verified at hbar={row.hbar:g}")
        _emit("\n".join(rows) + "\n", args.out)
        report.results = result.as_dict()
        return

    if not (args.lq and args.lp):
        raise InputFormatError("cross-scan needs --lq and --lp ranges")
    spec = StateSpec.from_args(args, hbar)
    state = spec.build(config["tolerances"]["loaded"])
    m = moments_of_grid(state) if spec.kind == "grid-file" else state.moments()

    params, skipped = [], 0
    for lq in _scan_range(args.lq, "--lq"):
        for lp in _scan_range(args.lp, "--lp"):
            if lq == 0.0 or lp == 0.0:
                skipped += 1
                continue
            params.append(ScaleParams(lq, lp))
    if not params:
        raise InputFormatError("cross-scan range holds no nonzero parameters")
    if skipped:
        log.info(f"cross-scan: skipped {skipped} samples with a zero parameter")

    result = group_vs_semigroup_report(m, hbar, params, max_pairs=args.max_pairs, seed=args.seed)
    rows = ["lambda_q,lambda_p,classical_admissible,quantum_admissible_for_state,universal_quantum_admissible,margin"]
    for row in result.rows:
        rows.append(f"{row.params.lambda_q[0]:.17g},{row.params.lambda_p[0]:.17g},"
                    f"{str(row.classical_admissible).lower()},{str(row.quantum_admissible_for_state).lower()},"
                    f"{str(row.universal_quantum_admissible).lower()},{row.margin:.17g}")
    _emit("\n".join(rows) + "\n", args.out)
    report.results = {"skipped_zero_parameters": skipped, **result.summary()}
    if not result.closure_holds:
        report.warnings.append(f"semigroup closure failed for {len(result.closure_failures)} pairs")


COMMANDS = {
    "tomogram": cmd_tomogram,
    "invert": cmd_invert,
    "classify": cmd_classify,
    "scan": cmd_scan,
}


def _input_paths(args):
    names = ("grid", "frames", "tomo", "reference")
    return [getattr(args, name) for name in names if getattr(args, name, None)]


def main(argv=None):
    """
    Main entry point for the tomokit CLI

    Returns:
        Exit code: 0 success, 2 input error, 3 numeric failure
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage already; keep --help at 0
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    config = apply_overrides(load_config(args.config), args)
    setup_logging(config["logging"]["verbosity"], config["logging"]["log_dir"])

    report = RunReport(["tomokit"] + argv, input_digest(argv, _input_paths(args)))
    try:
        COMMANDS[args.command](args, config, report)
        if args.strict and report.warnings:
            raise NumericEscalation(f"{len(report.warnings)} numeric warning(s) under --strict: {report.warnings[0]}")
    except INPUT_ERRORS as e:
        log.error(f"{args.command}: {e}")
        report.status = EXIT_INPUT
    except (NumericEscalation,) + NUMERIC_ERRORS as e:
        log.error(f"{args.command}: {e}")
        report.status = EXIT_NUMERIC

    for warning in report.warnings:
        log.warning(f"{args.command}: {warning}")
    if args.report:
        write_json_report(args.report, report.as_dict())
    flush_logs()
    return report.status
