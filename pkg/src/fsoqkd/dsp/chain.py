"""Per-block receiver chain: SNU normalisation, frequency offset, phase recovery, equalisation, discard rule."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from fsoqkd.dsp.calibration import CalibrationRecord, normalize_to_snu
from fsoqkd.dsp.equalizer import equalize, estimate_gain
from fsoqkd.dsp.frequency import compensate_frequency_offset, estimate_frequency_offset
from fsoqkd.dsp.phase import DEFAULT_WINDOW, recover_phase
from fsoqkd.errors import UnrecoverableBlockError
from fsoqkd.signal.frame import QuantumFrame

logger = logging.getLogger(__name__)

DISCARD_SNR_DB = 3.0


@dataclass(frozen=True)
class RecoveredBlock:
    """Quantum symbols after DSP, still scaled by the channel slope and in SNU."""

    rx_quantum: np.ndarray
    tx_quantum: np.ndarray
    pilot_snr_db: float
    freq_offset: float
    gain: complex


def pilot_snr_db(rx: np.ndarray, frame: QuantumFrame) -> float:
    g = estimate_gain(rx, frame)
    p = frame.pilots
    residual = rx[frame.pilot_index] - g * p
    noise = float(np.mean(np.abs(residual) ** 2))
    signal = abs(g) ** 2 * float(np.mean(np.abs(p) ** 2))
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def process_block(
    rx: np.ndarray,
    frame: QuantumFrame,
    cal: CalibrationRecord | None = None,
    phase_window: int = DEFAULT_WINDOW,
    n_taps: int = 1,
    estimate_offset: bool = True,
    discard_snr_db: float = DISCARD_SNR_DB,
) -> RecoveredBlock:
    """Run the receiver DSP on one block.

    Raises UnrecoverableBlockError when the mean pilot SNR after recovery is below discard_snr_db.
    """
    if cal is not None:
        rx = normalize_to_snu(rx, cal)
    offset = 0.0
    if estimate_offset:
        offset = estimate_frequency_offset(rx, frame)
        rx = compensate_frequency_offset(rx, offset, frame.symbol_rate)
    rx = recover_phase(rx, frame, phase_window)

    snr = pilot_snr_db(rx, frame)
    if snr < discard_snr_db:
        raise UnrecoverableBlockError(
            f"Pilot SNR {snr:.2f} dB is below the {discard_snr_db:.1f} dB discard threshold.", snr_db=snr
        )
    g = estimate_gain(rx, frame)
    out = equalize(rx, frame, n_taps) * abs(g)
    logger.debug("[dsp] block recovered: snr=%.2f dB offset=%.1f Hz |g|=%.5g", snr, offset, abs(g))
    return RecoveredBlock(
        rx_quantum=out[frame.quantum_index],
        tx_quantum=frame.tx_quantum,
        pilot_snr_db=snr,
        freq_offset=offset,
        gain=g,
    )
