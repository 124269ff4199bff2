import logging

import numpy as np
from scipy.linalg import lstsq
from scipy.signal import lfilter

from fsoqkd.errors import InsufficientPilotsError, InvalidArgumentError
from fsoqkd.signal.frame import QuantumFrame

logger = logging.getLogger(__name__)


def estimate_gain(rx: np.ndarray, frame: QuantumFrame) -> complex:
    """Least-squares complex gain g minimising sum |rx_p - g p|^2 over the pilots."""
    idx = frame.pilot_index
    if idx.size == 0:
        raise InsufficientPilotsError("Frame carries no pilots.")
    p = frame.symbols[idx]
    y = rx[idx]
    energy = float(np.vdot(p, p).real)
    if energy == 0.0 or not np.any(y):
        raise InsufficientPilotsError("Zero pilot energy; cannot estimate the channel gain.")
    return complex(np.vdot(p, y) / energy)


def _fir_taps(rx: np.ndarray, frame: QuantumFrame, n_taps: int) -> np.ndarray:
    # centred pilot-directed LS: p_k ~ sum_j w_j rx[k + half - j]
    half = n_taps // 2
    idx = frame.pilot_index
    idx = idx[(idx - (n_taps - 1 - half) >= 0) & (idx + half < rx.size)]
    if idx.size < 4 * n_taps:
        raise InsufficientPilotsError(f"{idx.size} usable pilots cannot train {n_taps} taps.")
    cols = idx[:, None] + half - np.arange(n_taps)[None, :]
    w, *_ = lstsq(rx[cols], frame.symbols[idx])
    return w


def equalize(rx: np.ndarray, frame: QuantumFrame, n_taps: int = 1) -> np.ndarray:
    """Undo the channel gain: a single LS gain by default, a pilot-trained FIR for n_taps > 1."""
    if n_taps < 1:
        raise InvalidArgumentError(f"n_taps must be >= 1, got {n_taps}.")
    if n_taps == 1:
        return rx / estimate_gain(rx, frame)
    w = _fir_taps(rx, frame, n_taps)
    half = n_taps // 2
    padded = np.concatenate((rx, np.zeros(half, dtype=rx.dtype)))
    out = lfilter(w, [1.0], padded)[half:]
    logger.debug("[dsp] FIR equalizer trained, %d taps, |w| peak %.4g", n_taps, float(np.max(np.abs(w))))
    return out
