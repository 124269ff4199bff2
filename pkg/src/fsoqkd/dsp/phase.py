import logging

import numpy as np
from scipy.ndimage import uniform_filter1d

from fsoqkd.errors import InsufficientPilotsError, InvalidArgumentError
from fsoqkd.signal.frame import QuantumFrame

logger = logging.getLogger(__name__)

# pilots averaged per phase estimate; fast phase noise needs a shorter window
DEFAULT_WINDOW = 4096


def pilot_phase(rx: np.ndarray, frame: QuantumFrame, window: int = DEFAULT_WINDOW) -> np.ndarray:
    """Smoothed, unwrapped phase at every symbol position."""
    if window < 1:
        raise InvalidArgumentError(f"window must be >= 1, got {window}.")
    idx = frame.pilot_index
    if idx.size == 0:
        raise InsufficientPilotsError("Frame carries no pilots.")
    z = rx[idx] * np.conj(frame.symbols[idx])
    if window > 1:
        z = uniform_filter1d(z.real, window, mode="nearest") + 1j * uniform_filter1d(z.imag, window, mode="nearest")
    phi = np.unwrap(np.angle(z))
    return np.interp(np.arange(rx.size), idx, phi)


def recover_phase(rx: np.ndarray, frame: QuantumFrame, window: int = DEFAULT_WINDOW) -> np.ndarray:
    """Remove the pilot-tracked phase: per-pilot products averaged over `window` pilots, interpolated in between."""
    return rx * np.exp(-1j * pilot_phase(rx, frame, window))
