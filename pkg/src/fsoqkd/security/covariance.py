"""Covariance-matrix route to the trusted-detector Holevo bound.

Modes are ordered A, B, F, G with quadratures (x1, p1, x2, p2, ...). The detector is a beam splitter
of transmissivity eta mixing B with one half (F) of an EPR pair (F, G) of variance
1 + 2 v_el / (1 - eta); B is then measured by an ideal heterodyne.
"""

import logging
import math

import numpy as np
from scipy.linalg import block_diag, eigh, solve

from fsoqkd.errors import InvalidArgumentError, PhysicalityError
from fsoqkd.security.entropy import entropy_from_eigenvalues, omega

logger = logging.getLogger(__name__)

_I2 = np.eye(2)
_Z2 = np.diag([1.0, -1.0])


def two_mode_cm(a: float, b: float, c: float) -> np.ndarray:
    return np.block([[a * _I2, c * _Z2], [c * _Z2, b * _I2]])


def symplectic_spectrum(cm: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues via the Hermitian form sqrt(cm) i*Omega sqrt(cm); same spectrum as i*Omega*cm."""
    w, u = eigh(cm)
    if np.any(w <= 0):
        raise PhysicalityError("Covariance matrix is not positive definite.", diagnostics={"eigenvalues": w.tolist()})
    root = (u * np.sqrt(w)) @ u.T
    ev = np.linalg.eigvalsh(root @ (1j * omega(cm.shape[0] // 2)) @ root)
    return np.sort(ev[ev > 0])


def beam_splitter(cm: np.ndarray, i: int, j: int, eta: float) -> np.ndarray:
    n = cm.shape[0]
    s = np.eye(n)
    t, r = math.sqrt(eta), math.sqrt(1.0 - eta)
    ii, jj = slice(2 * i, 2 * i + 2), slice(2 * j, 2 * j + 2)
    s[ii, ii] = t * _I2
    s[ii, jj] = r * _I2
    s[jj, ii] = -r * _I2
    s[jj, jj] = t * _I2
    return s @ cm @ s.T


def heterodyne_condition(cm: np.ndarray, mode: int) -> np.ndarray:
    """CM of the remaining modes after an ideal heterodyne on `mode`: g_A - s (g_B + I)^-1 s^T."""
    keep = np.r_[0 : 2 * mode, 2 * mode + 2 : cm.shape[0]]
    meas = np.r_[2 * mode, 2 * mode + 1]
    g_a = cm[np.ix_(keep, keep)]
    g_b = cm[np.ix_(meas, meas)]
    s = cm[np.ix_(keep, meas)]
    return g_a - s @ solve(g_b + _I2, s.T, assume_a="pos")


def _detector(eta: float, v_el: float) -> tuple[float, float]:
    # eta = 1 with v_el > 0 has no beam-splitter model; the noiseless detector with the same chi_het replaces it
    if eta >= 1.0:
        if v_el == 0.0:
            return 1.0, 1.0
        eta, v_el = 1.0 / (1.0 + v_el), 0.0
    return eta, 1.0 + 2.0 * v_el / (1.0 - eta)


def holevo_from_covariance(va: float, b: float, z: float, eta: float, v_el: float) -> float:
    """chi_BE = S(AB) - S(AFG | heterodyne on B) for the Alice-Bob state [[V, z], [z, b]]."""
    v = va + 1.0
    ab = two_mode_cm(v, b, z)
    s_e = entropy_from_eigenvalues(symplectic_spectrum(ab))

    eta_d, v_anc = _detector(eta, v_el)
    full = block_diag(ab, two_mode_cm(v_anc, v_anc, math.sqrt(max(v_anc * v_anc - 1.0, 0.0))))
    full = beam_splitter(full, 1, 2, eta_d)
    cond = heterodyne_condition(full, 1)
    s_e_given_b = entropy_from_eigenvalues(symplectic_spectrum(cond))
    logger.debug("[security] S(E)=%.12g S(E|b)=%.12g", s_e, s_e_given_b)
    return s_e - s_e_given_b


def holevo_numeric_oracle(va: float, T: float, xi: float, eta: float, v_el: float) -> float:
    """Independent numeric evaluation of the Gaussian-modulation Holevo bound."""
    if not va > 0 or not 0.0 < T <= 1.0:
        raise InvalidArgumentError(f"Need va > 0 and T in (0, 1], got va={va}, T={T}.")
    v = va + 1.0
    b = T * (v - 1.0) + 1.0 + T * xi
    return holevo_from_covariance(va, b, math.sqrt(T * (v * v - 1.0)), eta, v_el)
