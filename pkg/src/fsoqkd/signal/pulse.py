"""Root-raised-cosine pulse shaping for the oversampled channel path."""

import numpy as np
from scipy.signal import fftconvolve, upfirdn

DEFAULT_SPS = 8
DEFAULT_ROLLOFF = 0.2
DEFAULT_SPAN = 32


def rrc_taps(sps: int = DEFAULT_SPS, rolloff: float = DEFAULT_ROLLOFF, span: int = DEFAULT_SPAN) -> np.ndarray:
    """Unit-energy RRC impulse response covering `span` symbols."""
    beta = max(rolloff, np.finfo(np.float64).tiny)
    t = np.arange(-span * sps // 2, span * sps // 2 + 1, dtype=np.float64) / sps
    h = np.empty_like(t)
    eps = np.sqrt(np.finfo(np.float64).eps)
    at_zero = t == 0
    at_pole = np.abs(np.abs(4 * beta * t) - 1.0) < eps
    other = ~(at_zero | at_pole)
    h[at_zero] = 1.0 - beta + 4.0 * beta / np.pi
    h[at_pole] = (beta / np.sqrt(2.0)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
    )
    to = t[other]
    h[other] = (np.sin(np.pi * to * (1 - beta)) + 4 * beta * to * np.cos(np.pi * to * (1 + beta))) / (
        np.pi * to * (1 - (4 * beta * to) ** 2)
    )
    return h / np.sqrt(np.sum(h * h))


def shape(symbols: np.ndarray, taps: np.ndarray, sps: int) -> np.ndarray:
    return upfirdn(taps, symbols, up=sps)


def matched_filter(samples: np.ndarray, taps: np.ndarray, sps: int, n_symbols: int) -> np.ndarray:
    """Filter with the time-reversed pulse and pick one sample per symbol at the pulse peaks."""
    out = fftconvolve(samples, np.conj(taps[::-1]))
    return out[taps.size - 1 :: sps][:n_symbols]
