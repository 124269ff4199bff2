"""Gray-labelled square QAM and exact bit-wise demapping."""

import math
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from fsoqkd.errors import InvalidArgumentError


def _gray(i: np.ndarray) -> np.ndarray:
    return i ^ (i >> 1)


def _bits(values: np.ndarray, width: int) -> np.ndarray:
    return (values[:, None] >> np.arange(width - 1, -1, -1)[None, :]) & 1


@lru_cache(maxsize=8)
def gray_qam(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-energy square QAM points and their bit labels (order x log2(order)), Gray coded per dimension."""
    k = math.isqrt(order)
    if k * k != order or order < 4 or order & (order - 1):
        raise InvalidArgumentError(f"Square QAM needs an even power of two, got {order}.")
    half = int(math.log2(k))
    i, q = np.divmod(np.arange(order), k)
    points = (2 * i - (k - 1)) + 1j * (2 * q - (k - 1))
    points = points / np.sqrt(np.mean(np.abs(points) ** 2))
    labels = np.hstack((_bits(_gray(i), half), _bits(_gray(q), half))).astype(np.int8)
    points.setflags(write=False)
    labels.setflags(write=False)
    return points, labels


def bits_to_index(bits: np.ndarray, order: int) -> np.ndarray:
    _, labels = gray_qam(order)
    m = labels.shape[1]
    if bits.ndim != 2 or bits.shape[1] != m:
        raise InvalidArgumentError(f"Expected an (n, {m}) bit matrix, got {bits.shape}.")
    weights = 1 << np.arange(m - 1, -1, -1)
    lookup = np.empty(order, dtype=np.int64)
    lookup[labels.astype(np.int64) @ weights] = np.arange(order)
    return lookup[bits.astype(np.int64) @ weights]


def modulate(bits: np.ndarray, order: int) -> np.ndarray:
    points, _ = gray_qam(order)
    return points[bits_to_index(bits, order)]


def demap_llrs(rx: np.ndarray, noise_var: float, order: int) -> np.ndarray:
    """Exact LLRs log P(b=0|y) - log P(b=1|y) for uniform symbols; noise_var is complex (Es/SNR)."""
    if not noise_var > 0:
        raise InvalidArgumentError(f"noise_var must be positive, got {noise_var}.")
    points, labels = gray_qam(order)
    metric = -np.abs(rx[:, None] - points[None, :]) ** 2 / noise_var
    llrs = np.empty((rx.size, labels.shape[1]))
    for b in range(labels.shape[1]):
        zero = labels[:, b] == 0
        llrs[:, b] = logsumexp(metric[:, zero], axis=1) - logsumexp(metric[:, ~zero], axis=1)
    return llrs
