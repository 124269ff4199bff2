"""Data-free carrier frequency offset estimation on the pilot-conjugate sequence."""

import logging
import math

import numpy as np
from scipy.fft import fft

from fsoqkd.errors import InsufficientPilotsError
from fsoqkd.signal.frame import QuantumFrame

logger = logging.getLogger(__name__)

MIN_PILOTS = 1024


def _fft_size(n: int) -> int:
    return 1 << (n - 1).bit_length()


def estimate_frequency_offset(rx: np.ndarray, frame: QuantumFrame) -> float:
    """Offset in Hz from the peak of |FFT(rx_p * conj(p))|, refined by parabolic interpolation.

    Pilots are treated as uniformly spaced at the mean pilot spacing; the unambiguous range is
    +/- pilot_rate / 2.
    """
    idx = frame.pilot_index
    if idx.size < MIN_PILOTS:
        raise InsufficientPilotsError(f"Frequency estimation needs {MIN_PILOTS} pilots, frame has {idx.size}.")
    z = rx[idx] * np.conj(frame.symbols[idx])
    n_fft = _fft_size(idx.size)
    spectrum = np.abs(fft(z, n=n_fft))
    k = int(np.argmax(spectrum))
    a, b, c = spectrum[k - 1], spectrum[k], spectrum[(k + 1) % n_fft]
    denom = a - 2.0 * b + c
    delta = 0.5 * (a - c) / denom if denom != 0 else 0.0
    spacing = (idx[-1] - idx[0]) / (idx.size - 1)
    pilot_rate = frame.symbol_rate / spacing
    bin_pos = k + delta
    if bin_pos > n_fft / 2:
        bin_pos -= n_fft
    offset = bin_pos * pilot_rate / n_fft
    logger.debug("[dsp] frequency offset %.1f Hz (bin %d%+.3f of %d)", offset, k, delta, n_fft)
    return float(offset)


def compensate_frequency_offset(rx: np.ndarray, offset: float, symbol_rate: float) -> np.ndarray:
    k = np.arange(rx.size)
    return rx * np.exp(-2j * math.pi * offset * k / symbol_rate)
