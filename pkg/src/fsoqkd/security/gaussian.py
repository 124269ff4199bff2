"""Closed-form heterodyne key-rate terms for Gaussian modulation with a trusted noisy detector.

Conventions: V = va + 1; chi_line = (1-T)/T + xi with xi referred to the channel input;
chi_het = (2 - eta + 2 v_el)/eta; chi_tot = chi_line + chi_het/T.
"""

import math

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.security.entropy import entropy_from_eigenvalues


def _check(va: float, T: float, eta: float, v_el: float) -> None:
    if not va > 0:
        raise InvalidArgumentError(f"va must be positive, got {va}.")
    if not 0.0 < T <= 1.0:
        raise InvalidArgumentError(f"T must lie in (0, 1], got {T}.")
    if not 0.0 < eta <= 1.0 or v_el < 0:
        raise InvalidArgumentError(f"Need eta in (0, 1] and v_el >= 0, got eta={eta}, v_el={v_el}.")


def chi_line(T: float, xi: float) -> float:
    return (1.0 - T) / T + xi


def chi_het(eta: float, v_el: float) -> float:
    return (2.0 - eta + 2.0 * v_el) / eta


def mutual_information(va: float, T: float, xi: float, eta: float, v_el: float) -> float:
    """Alice-Bob heterodyne mutual information in bits per symbol; 0 for T = 0."""
    if T == 0.0:
        return 0.0
    _check(va, T, eta, v_el)
    v = va + 1.0
    total = chi_line(T, xi) + chi_het(eta, v_el) / T
    return math.log2((v + total) / (1.0 + total))


def _pair(s: float, p: float) -> tuple[float, float]:
    # roots of l^4 - s l^2 + p = 0
    disc = math.sqrt(max(s * s - 4.0 * p, 0.0))
    return math.sqrt(max(0.5 * (s + disc), 0.0)), math.sqrt(max(0.5 * (s - disc), 0.0))


def holevo_bound_gaussian(va: float, T: float, xi: float, eta: float, v_el: float) -> float:
    """Reverse-reconciliation Holevo bound chi_BE in bits per symbol.

    Raises PhysicalityError if any symplectic eigenvalue falls below 1.
    """
    _check(va, T, eta, v_el)
    v = va + 1.0
    cl = chi_line(T, xi)
    ch = chi_het(eta, v_el)
    ct = cl + ch / T

    a = v * v * (1.0 - 2.0 * T) + 2.0 * T + T * T * (v + cl) ** 2
    b = T * T * (v * cl + 1.0) ** 2
    l1, l2 = _pair(a, b)

    sqrt_b = math.sqrt(b)
    norm = (T * (v + ct)) ** 2
    c = (a * ch * ch + b + 1.0 + 2.0 * ch * (v * sqrt_b + T * (v + cl)) + 2.0 * T * (v * v - 1.0)) / norm
    d = (v + sqrt_b * ch) ** 2 / norm
    l3, l4 = _pair(c, d)

    return entropy_from_eigenvalues([l1, l2]) - entropy_from_eigenvalues([l3, l4])
