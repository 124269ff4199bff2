"""Columnar binary frame export.

Header (32 bytes): b"QFRM", u16 version, 2 pad bytes, f64 symbol rate, f64 pilot amplitude, u64 count.
Body: I column (f64), Q column (f64), pilot flag column (u8), all little-endian.
"""

import struct
from pathlib import Path

import numpy as np

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.signal.frame import QuantumFrame

MAGIC = b"QFRM"
VERSION = 1
_HEADER = struct.Struct("<4sHxxddQ")


def write_frame(frame: QuantumFrame, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, frame.symbol_rate, frame.pilot_amplitude, frame.n_symbols))
        f.write(frame.symbols.real.astype("<f8").tobytes())
        f.write(frame.symbols.imag.astype("<f8").tobytes())
        f.write(frame.pilot_mask.astype(np.uint8).tobytes())
    return path


def read_frame(path: str | Path) -> QuantumFrame:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise InvalidArgumentError(f"{path}: truncated header.")
    magic, version, rate, amplitude, n = _HEADER.unpack_from(raw)
    if magic != MAGIC or version != VERSION:
        raise InvalidArgumentError(f"{path}: not a version {VERSION} QFRM file.")
    if len(raw) != _HEADER.size + 17 * n:
        raise InvalidArgumentError(f"{path}: payload size does not match {n} symbols.")
    off = _HEADER.size
    re = np.frombuffer(raw, dtype="<f8", count=n, offset=off)
    im = np.frombuffer(raw, dtype="<f8", count=n, offset=off + 8 * n)
    mask = np.frombuffer(raw, dtype=np.uint8, count=n, offset=off + 16 * n).astype(bool)
    symbols = re + 1j * im
    return QuantumFrame(
        symbols=symbols,
        pilot_mask=mask,
        tx_quantum=symbols[~mask].copy(),
        symbol_rate=rate,
        pilot_amplitude=amplitude,
    )
