"""Trace import/export.

Text: two whitespace-separated columns (time_s, intensity), '#' comments allowed.
Binary: 16-byte header (b"FSOT", u16 version, 2 pad bytes, f64 sample rate) then little-endian f64 samples.
"""

import struct
from pathlib import Path

import numpy as np

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.turbulence.params import IntensityTrace

MAGIC = b"FSOT"
VERSION = 1
_HEADER = struct.Struct("<4sHxxd")


def write_trace_text(trace: IntensityTrace, path: str | Path) -> Path:
    path = Path(path)
    data = np.column_stack((trace.times, trace.samples))
    np.savetxt(path, data, fmt="%.17g", header=f"time_s intensity rate={trace.sample_rate:.17g}")
    return path


def read_trace_text(path: str | Path) -> IntensityTrace:
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise InvalidArgumentError(f"{path}: expected two columns and at least two rows.")
    dt = np.diff(data[:, 0])
    if np.any(dt <= 0):
        raise InvalidArgumentError(f"{path}: time column must be strictly increasing.")
    return IntensityTrace(samples=data[:, 1], sample_rate=1.0 / float(np.median(dt)))


def write_trace_binary(trace: IntensityTrace, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, trace.sample_rate))
        f.write(trace.samples.astype("<f8").tobytes())
    return path


def read_trace_binary(path: str | Path) -> IntensityTrace:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise InvalidArgumentError(f"{path}: truncated header.")
    magic, version, rate = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise InvalidArgumentError(f"{path}: bad magic {magic!r}.")
    if version != VERSION:
        raise InvalidArgumentError(f"{path}: unsupported version {version}.")
    body = raw[_HEADER.size :]
    if len(body) % 8:
        raise InvalidArgumentError(f"{path}: payload is not a whole number of f64 samples.")
    return IntensityTrace(samples=np.frombuffer(body, dtype="<f8").copy(), sample_rate=rate)


def read_trace(path: str | Path) -> IntensityTrace:
    """Read either format, sniffing the magic bytes."""
    with open(path, "rb") as f:
        head = f.read(4)
    return read_trace_binary(path) if head == MAGIC else read_trace_text(path)
