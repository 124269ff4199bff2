"""Time-correlated intensity traces.

Log-intensity and the two Cartesian components of the pointing displacement are independent
first-order Gauss-Markov processes with unit stationary variance. The pointing factor is
a0*exp(-2 r^2/w^2) with r Rayleigh, which in normalised coordinates is a0*exp(-(x^2 + y^2)/(2 gamma^2)).
"""

import logging
import math

import numpy as np
from scipy.signal import lfilter

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.turbulence.params import IntensityTrace, TurbulenceParams

logger = logging.getLogger(__name__)


def _gauss_markov(
    rng: np.random.Generator, n: int, rho: float, z0: float | None = None, rho0: float = 0.0
) -> np.ndarray:
    w = rng.standard_normal(n)
    first = w[0] if z0 is None else rho0 * z0 + math.sqrt(1.0 - rho0 * rho0) * w[0]
    if n == 1:
        return np.array([first])
    rest, _ = lfilter([math.sqrt(1.0 - rho * rho)], [1.0, -rho], w[1:], zi=[rho * first])
    return np.concatenate(([first], rest))


def _intensity(params: TurbulenceParams, z: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    sigma = math.sqrt(params.sigma2_ln)
    return np.exp(params.log_mean + sigma * z) * params.a0 * np.exp(-(x * x + y * y) / (2.0 * params.g))


def sample_trace(params: TurbulenceParams, duration: float, rate: float, seed: int) -> IntensityTrace:
    """Draw a stationary trace of duration*rate samples; bit-identical for a fixed seed."""
    n = int(round(duration * rate))
    if n < 2:
        raise InvalidArgumentError(f"duration*rate must be >= 2, got {duration * rate:g}.")
    rng = np.random.default_rng(seed)
    rho_ln = math.exp(-1.0 / (rate * params.tau_corr_ln))
    rho_pe = math.exp(-1.0 / (rate * params.tau_corr_pe))
    z = _gauss_markov(rng, n, rho_ln)
    x = _gauss_markov(rng, n, rho_pe)
    y = _gauss_markov(rng, n, rho_pe)
    logger.debug("[turbulence] sampled %d points at %.3g Hz (rho_ln=%.6f, rho_pe=%.6f)", n, rate, rho_ln, rho_pe)
    return IntensityTrace(samples=_intensity(params, z, x, y), sample_rate=rate, seed=seed)


def sample_capture_trace(
    params: TurbulenceParams,
    n_captures: int,
    capture_duration: float,
    interval: float,
    rate: float,
    seed: int,
) -> list[IntensityTrace]:
    """Draw duty-cycled captures of one continuous process.

    Each capture holds capture_duration*rate samples and captures start `interval` seconds apart.
    The latent states are advanced exactly across the gaps, so no samples are drawn for dead time.
    """
    m = int(round(capture_duration * rate))
    if n_captures < 1 or m < 1:
        raise InvalidArgumentError("Need at least one capture with at least one sample.")
    if interval * rate < m:
        raise InvalidArgumentError("Captures overlap: interval is shorter than capture_duration.")
    rng = np.random.default_rng(seed)
    rho_ln = math.exp(-1.0 / (rate * params.tau_corr_ln))
    rho_pe = math.exp(-1.0 / (rate * params.tau_corr_pe))
    gap = interval - (m - 1) / rate
    gap_ln = math.exp(-gap / params.tau_corr_ln)
    gap_pe = math.exp(-gap / params.tau_corr_pe)

    captures = []
    z = x = y = None
    for _ in range(n_captures):
        zs = _gauss_markov(rng, m, rho_ln, z, gap_ln)
        xs = _gauss_markov(rng, m, rho_pe, x, gap_pe)
        ys = _gauss_markov(rng, m, rho_pe, y, gap_pe)
        z, x, y = zs[-1], xs[-1], ys[-1]
        captures.append(IntensityTrace(samples=_intensity(params, zs, xs, ys), sample_rate=rate, seed=seed))
    return captures
