"""File operation utilities for tomokit"""

import os
import csv
import io
import json
import hashlib
import tempfile

import numpy as np

from ..config import LOADED_TOL
from ..errors import FrameError, InputFormatError
from ..phase_space.model import Frame, PhaseGrid
from ..tomography.tomogram import SampledTomogram
from .logging import log

PHASEGRID_HEADER = "# phasegrid v1"
TOMOGRAM_HEADER = ["mu", "nu", "x", "value"]


def _fmt(value):
    return f"{float(value):.17g}"


def compute_file_checksum(file_path, block_size=65536):
    """
    Compute MD5 checksum of a file

    Args:
        file_path: The path to the file
        block_size: The block size for reading the file in chunks (default: 64KB)

    Returns:
        The MD5 checksum of the file as a hexadecimal string, or None if the file doesn't exist
    """
    if not os.path.exists(file_path):
        return None

    try:
        md5 = hashlib.md5()
        with open(file_path, 'rb') as f:
            for block in iter(lambda: f.read(block_size), b''):
                md5.update(block)
        return md5.hexdigest()
    except OSError as e:
        log.error(f"Error computing checksum for {file_path}: {e}")
        return None


def input_digest(command, paths=()):
    """MD5 over the command echo and the contents of every input file"""
    md5 = hashlib.md5(" ".join(command).encode())
    for path in paths:
        md5.update((compute_file_checksum(path) or "missing").encode())
    return md5.hexdigest()


def atomic_write_text(path, text):
    """Write text through a temporary file in the target directory, then rename over path"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tomokit_", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    log.debug(f"Wrote {path}")


def format_phasegrid(g):
    """phasegrid v1 text: header, q range and count, p range and count, then one line per q"""
    lines = [
        PHASEGRID_HEADER,
        f"{_fmt(g.q_min)} {_fmt(g.q_max)} {g.n_q}",
        f"{_fmt(g.p_min)} {_fmt(g.p_max)} {g.n_p}",
    ]
    values = g.values.real if np.iscomplexobj(g.values) else g.values
    lines.extend(" ".join(_fmt(v) for v in row) for row in values)
    return "\n".join(lines) + "\n"


def write_phasegrid(path, g):
    atomic_write_text(path, format_phasegrid(g))


def _parse_range(line, number):
    parts = line.split()
    if len(parts) != 3:
        raise InputFormatError(f"expected 'min max count', got '{line.strip()}'", line=number)
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputFormatError(f"cannot parse range '{line.strip()}'", line=number)
    if not hi > lo or count < 2:
        raise InputFormatError(f"range needs max > min and at least 2 samples, got '{line.strip()}'",
                               line=number)
    return lo, hi, count


def read_phasegrid(path, kind="density", tol=LOADED_TOL):
    """
    Read a phasegrid v1 file

    Args:
        path: File path
        kind: Grid kind to declare on the result
        tol: Normalization tolerance for the loaded grid

    Returns:
        PhaseGrid
    """
    with open(path, "r") as f:
        lines = f.read().splitlines()
    if not lines or lines[0].strip() != PHASEGRID_HEADER:
        raise InputFormatError(f"missing '{PHASEGRID_HEADER}' header", line=1)
    if len(lines) < 3:
        raise InputFormatError("missing q or p range", line=len(lines) + 1)
    q_min, q_max, n_q = _parse_range(lines[1], 2)
    p_min, p_max, n_p = _parse_range(lines[2], 3)

    rows = [line for line in lines[3:]]
    while rows and not rows[-1].strip():
        rows.pop()
    if len(rows) != n_q:
        raise InputFormatError(f"expected {n_q} value rows, found {len(rows)}", line=4 + min(len(rows), n_q))

    values = np.empty((n_q, n_p))
    for i, row in enumerate(rows):
        number = 4 + i
        parts = row.split()
        if len(parts) != n_p:
            raise InputFormatError(f"expected {n_p} values, found {len(parts)}", line=number)
        try:
            values[i] = [float(v) for v in parts]
        except ValueError:
            raise InputFormatError(f"non-numeric value in row {i}", line=number)

    log.debug(f"Read {n_q}x{n_p} phase grid from {path}")
    return PhaseGrid(q_min, q_max, p_min, p_max, values, kind=kind, tol=tol)


def format_tomogram(t):
    """Tomogram CSV with header mu,nu,x,value; rows grouped by frame"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TOMOGRAM_HEADER)
    x = t.x
    for frame, row in zip(t.frames, t.values):
        mu, nu = _fmt(frame.mu), _fmt(frame.nu)
        for xi, value in zip(x, row):
            writer.writerow([mu, nu, _fmt(xi), _fmt(value)])
    return buffer.getvalue()


def write_tomogram(path, t):
    atomic_write_text(path, format_tomogram(t))


def read_tomogram(path, tol=LOADED_TOL):
    """
    Read a tomogram CSV; every frame must share one uniform X grid

    Args:
        path: File path
        tol: Declared tolerance of the loaded tomogram

    Returns:
        SampledTomogram
    """
    frames, rows, xs = [], [], []
    current = None
    with open(path, "r", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TOMOGRAM_HEADER:
            raise InputFormatError(f"header must be {','.join(TOMOGRAM_HEADER)}", line=1)
        for record in reader:
            number = reader.line_num
            if not record:
                continue
            if len(record) != 4:
                raise InputFormatError(f"expected 4 fields, found {len(record)}", line=number)
            try:
                mu, nu, x, value = (float(v) for v in record)
            except ValueError:
                raise InputFormatError(f"non-numeric field in '{','.join(record)}'", line=number)
            if current != (mu, nu):
                if (mu, nu) in frames:
                    raise InputFormatError(f"frame ({mu}, {nu}) is not contiguous", line=number)
                current = (mu, nu)
                frames.append(current)
                rows.append([])
                xs.append([])
            rows[-1].append(value)
            xs[-1].append(x)

    if not frames:
        raise InputFormatError("no tomogram rows", line=2)
    x = np.array(xs[0])
    for k, other in enumerate(xs[1:], start=1):
        if len(other) != len(x) or not np.allclose(other, x, rtol=1e-12, atol=0.0):
            raise InputFormatError(f"frame {frames[k]} does not share the X grid of the first frame")
    if len(x) < 2 or not np.allclose(np.diff(x), (x[-1] - x[0]) / (len(x) - 1), rtol=1e-9, atol=0.0):
        raise InputFormatError("X grid must be uniform and increasing")

    try:
        frame_objects = tuple(Frame(mu, nu) for mu, nu in frames)
    except FrameError as e:
        raise InputFormatError(str(e))
    log.debug(f"Read tomogram with {len(frames)} frames x {len(x)} points from {path}")
    return SampledTomogram(frame_objects, float(x[0]), float(x[-1]), np.array(rows), tol=tol)


def read_frames(path):
    """
    Read a frame list: one 'mu nu' pair per line (comma or whitespace separated)

    Blank lines and lines starting with '#' are skipped.
    """
    frames = []
    with open(path, "r") as f:
        for number, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.replace(",", " ").split()
            if len(parts) != 2:
                raise InputFormatError(f"expected 'mu nu', got '{text}'", line=number)
            try:
                frames.append(Frame(float(parts[0]), float(parts[1])))
            except ValueError:
                raise InputFormatError(f"cannot parse frame '{text}'", line=number)
            except FrameError as e:
                raise InputFormatError(str(e), line=number)
    if not frames:
        raise InputFormatError(f"no frames in {path}")
    return frames


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def format_json_report(report):
    return json.dumps(report, indent=2, default=_json_default) + "\n"


def write_json_report(path, report):
    """Write a report dictionary as JSON, keys in insertion order"""
    atomic_write_text(path, format_json_report(report))
