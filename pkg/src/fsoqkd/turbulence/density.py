"""Marginal densities of the combined log-normal x pointing-jitter intensity.

With Y = exp(mu + sigma*u), u ~ N(0, 1), and the pointing factor h on [0, a0] with
P(h <= x) = (x/a0)**g, the product I = Y*h has

    f(i) = (g/i) * J(u0),   F(i) = Phi(u0) + J(u0),   u0 = (ln(i/a0) - mu)/sigma,
    J(u0) = integral_0^inf exp(-g*sigma*v) * phi(u0 + v) dv.

J is evaluated by adaptive quadrature on a window around the peak of its integrand.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from fsoqkd.errors import NumericalError
from fsoqkd.turbulence.params import TurbulenceParams

logger = logging.getLogger(__name__)

QUAD_RTOL = 1e-8
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class TurbulenceMoments:
    mean: float
    second_moment: float
    scintillation_index: float


def analytic_moments(params: TurbulenceParams) -> TurbulenceMoments:
    g, s2, mu, a0 = params.g, params.sigma2_ln, params.log_mean, params.a0
    m1 = math.exp(mu + 0.5 * s2) * a0 * g / (g + 1.0)
    m2 = math.exp(2.0 * mu + 2.0 * s2) * a0 * a0 * g / (g + 2.0)
    return TurbulenceMoments(mean=m1, second_moment=m2, scintillation_index=m2 / (m1 * m1) - 1.0)


def _pointing_pdf_scalar(h: float, g: float, a0: float) -> float:
    if h < 0.0 or h > a0:
        return 0.0
    if h == 0.0:
        if g > 1.0:
            return 0.0
        return 1.0 / a0 if g == 1.0 else math.inf
    return math.exp(math.log(g) - g * math.log(a0) + (g - 1.0) * math.log(h))


def _pointing_cdf_scalar(h: float, g: float, a0: float) -> float:
    if h <= 0.0:
        return 0.0
    if h >= a0:
        return 1.0
    return math.exp(g * math.log(h / a0))


def pointing_pdf(h, params: TurbulenceParams):
    """(gamma^2 / a0^gamma^2) * h^(gamma^2 - 1) on [0, a0], zero elsewhere."""
    return _apply(lambda x: _pointing_pdf_scalar(x, params.g, params.a0), h)


def pointing_cdf(h, params: TurbulenceParams):
    return _apply(lambda x: _pointing_cdf_scalar(x, params.g, params.a0), h)


def _log_tail_integral(u0: float, k: float) -> float:
    """log of integral_0^inf exp(-k*v) * phi(u0 + v) dv."""
    c = -(u0 + k)  # centre of the completed square
    if c >= 0.0:
        lo, hi, peak = max(0.0, c - 12.0), c + 12.0, c
    else:
        lo, hi, peak = 0.0, min(12.0, 60.0 / -c), 0.0
    log_peak = -k * peak - 0.5 * (u0 + peak) ** 2

    def integrand(v):
        return math.exp(-k * v - 0.5 * (u0 + v) ** 2 - log_peak)

    points = [peak] if lo < peak < hi else None
    out = integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=QUAD_RTOL, limit=200, points=points, full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3 or not np.isfinite(value):
        raise NumericalError(
            "combined intensity quadrature did not converge",
            diagnostics={"u0": u0, "k": k, "value": value, "abserr": abserr, "message": out[3] if len(out) > 3 else ""},
        )
    if value <= 0.0:
        return -math.inf
    return log_peak + math.log(value) - _LOG_SQRT_2PI


def _combined_pdf_scalar(i: float, params: TurbulenceParams) -> float:
    if not i > 0.0:
        return 0.0
    if math.isinf(i):
        return 0.0
    g, mu, a0 = params.g, params.log_mean, params.a0
    sigma = math.sqrt(params.sigma2_ln)
    if sigma == 0.0:
        return _pointing_pdf_scalar(i, g, a0 * math.exp(mu))
    u0 = (math.log(i / a0) - mu) / sigma
    log_j = _log_tail_integral(u0, g * sigma)
    return math.exp(math.log(g) - math.log(i) + log_j) if log_j > -math.inf else 0.0


def _combined_cdf_scalar(i: float, params: TurbulenceParams) -> float:
    if not i > 0.0:
        return 0.0
    if math.isinf(i):
        return 1.0
    g, mu, a0 = params.g, params.log_mean, params.a0
    sigma = math.sqrt(params.sigma2_ln)
    if sigma == 0.0:
        return _pointing_cdf_scalar(i, g, a0 * math.exp(mu))
    u0 = (math.log(i / a0) - mu) / sigma
    log_j = _log_tail_integral(u0, g * sigma)
    tail = math.exp(log_j) if log_j > -math.inf else 0.0
    return min(1.0, float(special.ndtr(u0)) + tail)


def combined_pdf(i, params: TurbulenceParams):
    """Density of I = I_ln * I_pe, normalised so E[I] = params.mean_intensity."""
    return _apply(lambda x: _combined_pdf_scalar(x, params), i)


def combined_cdf(i, params: TurbulenceParams):
    return _apply(lambda x: _combined_cdf_scalar(x, params), i)


def outage_probability(threshold: float, params: TurbulenceParams) -> float:
    return float(combined_cdf(threshold, params))


def _apply(fn, x):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        return fn(float(arr))
    return np.fromiter((fn(float(v)) for v in arr.ravel()), dtype=np.float64, count=arr.size).reshape(arr.shape)
