import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from fsoqkd.coex.qam import demap_llrs, gray_qam, modulate
from fsoqkd.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_FEC_RATE = 0.8


def gmi(tx_bits: np.ndarray, llrs: np.ndarray) -> float:
    """m - mean over symbols of sum_i log2(1 + exp(-(-1)^b L)); L > 0 favours bit 0."""
    if tx_bits.shape != llrs.shape or tx_bits.ndim != 2:
        raise InvalidArgumentError(f"Bit matrix {tx_bits.shape} and LLR matrix {llrs.shape} must match.")
    sign = 1.0 - 2.0 * tx_bits
    penalty = np.logaddexp(0.0, -sign * llrs) / math.log(2.0)
    return float(tx_bits.shape[1] - np.mean(np.sum(penalty, axis=1)))


def ngmi(tx_bits: np.ndarray, llrs: np.ndarray, m: int) -> float:
    if tx_bits.ndim != 2 or tx_bits.shape[1] != m:
        raise InvalidArgumentError(f"Bit matrix has {tx_bits.shape[-1]} columns, expected m={m}.")
    return gmi(tx_bits, llrs) / m


def supports_fec_rate(ngmi_value: float, rate: float = DEFAULT_FEC_RATE) -> bool:
    return ngmi_value >= rate


def simulate_ngmi(snr_db: float, order: int = 64, n_symbols: int = 10_000, seed=0) -> float:
    """NGMI of Gray QAM over complex AWGN at Es/N0 = snr_db."""
    rng = np.random.default_rng(seed)
    m = gray_qam(order)[1].shape[1]
    bits = rng.integers(0, 2, size=(n_symbols, m), dtype=np.int8)
    tx = modulate(bits, order)
    noise_var = 10.0 ** (-snr_db / 10.0)
    rx = tx + math.sqrt(noise_var / 2.0) * (rng.standard_normal(n_symbols) + 1j * rng.standard_normal(n_symbols))
    value = ngmi(bits, demap_llrs(rx, noise_var, order), m)
    logger.debug("[coex] %d-QAM at %.2f dB: NGMI %.4f", order, snr_db, value)
    return value


@dataclass(frozen=True)
class NgmiRow:
    block_id: int
    channel_index: int
    snr_db: float
    ngmi: float


NGMI_COLUMNS = ("block_id", "channel_index", "snr_db", "ngmi")


def write_ngmi_csv(rows: Iterable[NgmiRow], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(NGMI_COLUMNS)
        for r in sorted(rows, key=lambda r: (r.block_id, r.channel_index)):
            writer.writerow([r.block_id, r.channel_index, repr(float(r.snr_db)), repr(float(r.ngmi))])
    return path
