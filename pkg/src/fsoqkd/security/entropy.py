"""Von Neumann entropy of Gaussian states from symplectic spectra."""

import math

import numpy as np
from scipy.special import xlogy

from fsoqkd.errors import PhysicalityError

PHYSICALITY_TOL = 1e-9


def g_entropy(x: float | np.ndarray) -> float | np.ndarray:
    """G(x) = (x+1) log2(x+1) - x log2(x), the entropy of a thermal mode with mean photon number x."""
    x = np.asarray(x, dtype=np.float64)
    out = (xlogy(x + 1.0, x + 1.0) - xlogy(x, x)) / math.log(2.0)
    return float(out) if out.ndim == 0 else out


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for quadrature ordering (x1, p1, x2, p2, ...)."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _checked(nu: np.ndarray) -> np.ndarray:
    nu = np.atleast_1d(np.asarray(nu, dtype=np.float64))
    if np.any(nu < 1.0 - PHYSICALITY_TOL) or not np.all(np.isfinite(nu)):
        raise PhysicalityError(
            f"Symplectic eigenvalue {float(np.min(nu)):.12g} is below 1; the state is unphysical.",
            diagnostics={"eigenvalues": nu.tolist()},
        )
    return np.maximum(nu, 1.0)


def entropy_from_eigenvalues(nu: np.ndarray) -> float:
    return float(np.sum(g_entropy((_checked(nu) - 1.0) / 2.0)))
