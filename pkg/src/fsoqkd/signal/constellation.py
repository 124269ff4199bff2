import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from fsoqkd.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (4, 16, 64, 256)
DEFAULT_ENTROPY_BITS = 6.0


@dataclass(frozen=True)
class Constellation:
    """Coherent-state amplitudes alpha_k with probabilities p_k.

    va = 2 * sum(p_k |alpha_k|^2) is the per-quadrature modulation variance in SNU.
    """

    points: np.ndarray
    probs: np.ndarray
    va: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        p = np.asarray(self.probs, dtype=np.float64)
        if pts.shape != p.shape or pts.ndim != 1:
            raise InvalidArgumentError("points and probs must be matching 1-D sequences.")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError("probs must be non-negative and sum to 1.")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", p)

    @property
    def order(self) -> int:
        return self.points.size

    @property
    def mean_photon_number(self) -> float:
        return float(np.sum(self.probs * np.abs(self.points) ** 2))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        idx = rng.choice(self.order, size=n, p=self.probs)
        return self.points[idx]


def _unit_grid(order: int) -> np.ndarray:
    if order not in SUPPORTED_ORDERS:
        raise InvalidArgumentError(f"Unsupported QAM order {order}; expected one of {SUPPORTED_ORDERS}.")
    m = math.isqrt(order)
    levels = np.arange(-(m - 1), m, 2, dtype=np.float64)
    grid = (levels[:, None] + 1j * levels[None, :]).ravel()
    return grid / np.sqrt(np.mean(np.abs(grid) ** 2))


def _mb_probs(grid: np.ndarray, nu: float) -> np.ndarray:
    e = -nu * np.abs(grid) ** 2
    p = np.exp(e - e.max())
    return p / p.sum()


def entropy_bits(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return float(-np.sum(p * np.log2(p)))


def constellation_entropy(c: Constellation) -> float:
    return entropy_bits(c.probs)


def build_constellation(order: int, nu: float, va_target: float) -> Constellation:
    """Square QAM with Maxwell-Boltzmann weights exp(-nu |alpha|^2) on the unit-energy grid.

    nu = 0 gives uniform QAM. Amplitudes are scaled afterwards so that va equals va_target.
    """
    if not va_target > 0:
        raise InvalidArgumentError(f"va_target must be positive, got {va_target}.")
    if nu < 0:
        raise InvalidArgumentError(f"nu must be >= 0, got {nu}.")
    grid = _unit_grid(order)
    p = _mb_probs(grid, nu)
    scale = math.sqrt(va_target / (2.0 * float(np.sum(p * np.abs(grid) ** 2))))
    return Constellation(points=grid * scale, probs=p, va=float(va_target))


@lru_cache(maxsize=32)
def nu_for_entropy(order: int, bits: float = DEFAULT_ENTROPY_BITS) -> float:
    """Shaping rate giving the requested constellation entropy (Brent's method)."""
    grid = _unit_grid(order)
    if not 0 < bits < math.log2(order):
        raise InvalidArgumentError(f"Entropy target must lie in (0, {math.log2(order)}) bits.")

    def gap(nu: float) -> float:
        return entropy_bits(_mb_probs(grid, nu)) - bits

    hi = 1.0
    while gap(hi) > 0:
        hi *= 2.0
        if hi > 1e4:
            raise InvalidArgumentError(f"No shaping rate reaches {bits} bits for order {order}.")
    nu = brentq(gap, 0.0, hi, xtol=1e-12)
    logger.debug("[signal] nu=%.6f gives %.3f bits for %d-QAM", nu, bits, order)
    return float(nu)


def write_constellation(c: Constellation, path: str | Path) -> Path:
    path = Path(path)
    data = np.column_stack((c.points.real, c.points.imag, c.probs))
    np.savetxt(path, data, fmt="%.17g", header=f"re im prob va={c.va:.17g}")
    return path


def read_constellation(path: str | Path) -> Constellation:
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 3:
        raise InvalidArgumentError(f"{path}: expected three columns (re, im, prob).")
    points = data[:, 0] + 1j * data[:, 1]
    probs = data[:, 2] / data[:, 2].sum()
    return Constellation(points=points, probs=probs, va=2.0 * float(np.sum(probs * np.abs(points) ** 2)))
