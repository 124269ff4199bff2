import logging
from dataclasses import dataclass

import numpy as np

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.signal.constellation import Constellation

logger = logging.getLogger(__name__)

DEFAULT_SYMBOL_RATE = 250e6
DEFAULT_PILOT_RATIO = 0.5
DEFAULT_PILOT_AMPLITUDE = float(np.sqrt(20.0))


@dataclass(frozen=True)
class QuantumFrame:
    """Pilot-interleaved frame in quadrature units (x = 2*alpha)."""

    symbols: np.ndarray
    pilot_mask: np.ndarray
    tx_quantum: np.ndarray
    symbol_rate: float
    pilot_amplitude: float = DEFAULT_PILOT_AMPLITUDE

    @property
    def n_symbols(self) -> int:
        return self.symbols.size

    @property
    def n_pilots(self) -> int:
        return int(np.count_nonzero(self.pilot_mask))

    @property
    def pilot_index(self) -> np.ndarray:
        return np.flatnonzero(self.pilot_mask)

    @property
    def quantum_index(self) -> np.ndarray:
        return np.flatnonzero(~self.pilot_mask)

    @property
    def pilots(self) -> np.ndarray:
        return self.symbols[self.pilot_mask]

    @property
    def pilot_rate(self) -> float:
        return self.symbol_rate * self.n_pilots / self.n_symbols


def pilot_alphabet(pilot_amplitude: float) -> np.ndarray:
    return 2.0 * pilot_amplitude * np.exp(1j * np.pi * (2 * np.arange(4) + 1) / 4)


def pilot_positions(n: int, pilot_ratio: float) -> np.ndarray:
    if not 0.0 < pilot_ratio < 1.0:
        raise InvalidArgumentError(f"pilot_ratio must lie in (0, 1), got {pilot_ratio}.")
    mask = np.zeros(n, dtype=bool)
    if pilot_ratio == 0.5:
        mask[::2] = True
        return mask
    n_p = max(1, int(round(n * pilot_ratio)))
    mask[np.floor(np.arange(n_p) * n / n_p).astype(np.int64)] = True
    return mask


def build_frame(
    c: Constellation,
    n: int,
    pilot_ratio: float = DEFAULT_PILOT_RATIO,
    pilot_amplitude: float = DEFAULT_PILOT_AMPLITUDE,
    seed: int = 0,
    symbol_rate: float = DEFAULT_SYMBOL_RATE,
) -> QuantumFrame:
    """Quantum symbols i.i.d. from c, QPSK pilots at pilot_amplitude; deterministic for a seed.

    A ratio of 1/2 alternates strictly with pilots on even indices, other ratios spread pilots evenly.
    """
    if n < 2:
        raise InvalidArgumentError(f"Frame needs at least two symbols, got {n}.")
    mask = pilot_positions(n, pilot_ratio)
    rng = np.random.default_rng(seed)
    quantum = 2.0 * c.sample(rng, int(np.count_nonzero(~mask)))
    pilots = pilot_alphabet(pilot_amplitude)[rng.integers(0, 4, size=int(np.count_nonzero(mask)))]
    symbols = np.empty(n, dtype=np.complex128)
    symbols[mask] = pilots
    symbols[~mask] = quantum
    logger.debug("[signal] frame n=%d pilots=%d seed=%s", n, pilots.size, seed)
    return QuantumFrame(
        symbols=symbols,
        pilot_mask=mask,
        tx_quantum=quantum,
        symbol_rate=float(symbol_rate),
        pilot_amplitude=float(pilot_amplitude),
    )
