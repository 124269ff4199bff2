"""Block-level quantum channel: fading transmittance, excess noise, carrier offset and laser phase noise.

Output is in shot-noise units of the receiver: y = t * x * exp(i*phi_k) + n with t = sqrt(eta*T/2)
and per-quadrature noise variance 1 + v_el + eta*T*xi/2.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from fsoqkd.signal.frame import QuantumFrame
from fsoqkd.signal.pulse import DEFAULT_ROLLOFF, DEFAULT_SPS, matched_filter, rrc_taps, shape

logger = logging.getLogger(__name__)


class ChannelRealization(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    transmittance_block: float = Field(ge=0.0, le=1.0)
    xi_injected: float = Field(default=0.0, ge=0.0)
    freq_offset: float = 0.0
    linewidth_total: float = Field(default=200e3, ge=0.0)
    eta: float = Field(default=1.0, gt=0.0, le=1.0)
    v_el: float = Field(default=0.0, ge=0.0)

    @property
    def slope(self) -> float:
        return math.sqrt(self.eta * self.transmittance_block / 2.0)

    @property
    def noise_variance(self) -> float:
        return 1.0 + self.v_el + self.eta * self.transmittance_block * self.xi_injected / 2.0


def _phase(rng: np.random.Generator, n: int, step_rate: float, ch: ChannelRealization) -> np.ndarray:
    # Wiener phase, increment variance 2*pi*linewidth/step_rate, starting at zero
    steps = rng.standard_normal(n)
    steps[0] = 0.0
    q = 2.0 * math.pi * ch.linewidth_total / step_rate
    return 2.0 * math.pi * ch.freq_offset * np.arange(n) / step_rate + math.sqrt(q) * np.cumsum(steps)


def apply_channel(
    frame: QuantumFrame,
    ch: ChannelRealization,
    seed: int | np.random.SeedSequence = 0,
    oversampled: bool = False,
    sps: int = DEFAULT_SPS,
    rolloff: float = DEFAULT_ROLLOFF,
) -> np.ndarray:
    """Received symbol stream for one block.

    With oversampled=True the frame is RRC shaped at `sps` samples per symbol, impaired at sample
    level and brought back with a matched filter; noise is white per sample so the post-filter
    per-symbol variance is unchanged.
    """
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(ch.noise_variance)
    if not oversampled:
        phi = _phase(rng, frame.n_symbols, frame.symbol_rate, ch)
        noise = sigma * (rng.standard_normal(frame.n_symbols) + 1j * rng.standard_normal(frame.n_symbols))
        y = ch.slope * frame.symbols * np.exp(1j * phi) + noise
    else:
        taps = rrc_taps(sps, rolloff)
        wave = shape(frame.symbols, taps, sps)
        phi = _phase(rng, wave.size, frame.symbol_rate * sps, ch)
        noise = sigma * (rng.standard_normal(wave.size) + 1j * rng.standard_normal(wave.size))
        y = matched_filter(ch.slope * wave * np.exp(1j * phi) + noise, taps, sps, frame.n_symbols)
    logger.debug(
        "[channel] T=%.4g xi=%.3g df=%.3g Hz lw=%.3g Hz oversampled=%s",
        ch.transmittance_block,
        ch.xi_injected,
        ch.freq_offset,
        ch.linewidth_total,
        oversampled,
    )
    return y
