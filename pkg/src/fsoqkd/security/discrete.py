"""Holevo bound for arbitrary (discrete) modulation.

The Gaussian cross-correlation sqrt(T(V^2-1)) is replaced by the lower bound
Z = 2 sqrt(T) c - 2 sqrt(xi w), with c = Tr(tau^1/2 a tau^1/2 a^dag) for the average state tau of the
constellation and w = <n> + 1 - c^2/<n>. The bound then follows from Gaussian extremality.
"""

import logging
import math

import numpy as np
from scipy.linalg import eigh
from scipy.special import gammaln

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.security.covariance import holevo_from_covariance
from fsoqkd.signal.constellation import Constellation

logger = logging.getLogger(__name__)


def fock_cutoff(c: Constellation) -> int:
    r = float(np.max(np.abs(c.points)))
    return int(math.ceil(r * r + 10.0 * r + 20.0))


def coherent_amplitudes(points: np.ndarray, dim: int) -> np.ndarray:
    """<n|alpha_k> for n < dim, one column per point."""
    n = np.arange(dim)[:, None]
    r = np.abs(points)[None, :]
    with np.errstate(divide="ignore"):
        log_mag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1.0)
    log_mag = np.where((r == 0.0) & (n == 0), 0.0, log_mag)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(points)[None, :])


def average_state(c: Constellation, dim: int | None = None) -> np.ndarray:
    psi = coherent_amplitudes(c.points, dim or fock_cutoff(c))
    return (psi * c.probs[None, :]) @ psi.conj().T


def correlation_coefficient(c: Constellation, dim: int | None = None) -> float:
    """Tr(tau^1/2 a tau^1/2 a^dag) in a truncated Fock basis."""
    tau = average_state(c, dim)
    w, u = eigh(tau)
    root = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
    a = np.diag(np.sqrt(np.arange(1, tau.shape[0], dtype=np.float64)), k=1)
    return float(np.trace(root @ a @ root @ a.T).real)


def holevo_bound_discrete(c: Constellation, T: float, xi: float, eta: float, v_el: float) -> float:
    """chi_BE for the constellation c; never below the Gaussian bound at the same va."""
    n = c.mean_photon_number
    if c.order < 2 or n <= 0.0:
        raise InvalidArgumentError("A constellation with a single point carries no key.")
    if not 0.0 < T <= 1.0:
        raise InvalidArgumentError(f"T must lie in (0, 1], got {T}.")
    corr = correlation_coefficient(c)
    w = max(n + 1.0 - corr * corr / n, 0.0)
    z = 2.0 * math.sqrt(T) * corr - 2.0 * math.sqrt(max(xi, 0.0) * w)
    v = c.va + 1.0
    b = T * (v - 1.0) + 1.0 + T * xi
    logger.debug("[security] discrete bound: c=%.9g gaussian=%.9g w=%.3g", corr, math.sqrt(n * (n + 1.0)), w)
    return holevo_from_covariance(c.va, b, z, eta, v_el)
