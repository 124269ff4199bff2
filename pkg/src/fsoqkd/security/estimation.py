import logging
import math

import numpy as np
from scipy.stats import norm

from fsoqkd.dsp.calibration import CalibrationRecord
from fsoqkd.errors import InvalidArgumentError
from fsoqkd.security.params import ChannelEstimate, SecurityParams

logger = logging.getLogger(__name__)

MIN_SYMBOLS = 1_000


def confidence_z(eps: float) -> float:
    """Two-sided Gaussian z-score at confidence 1 - eps (about 6.47 at 1e-10)."""
    return float(norm.isf(eps / 2.0))


def estimate_channel(
    x: np.ndarray,
    y: np.ndarray,
    cal: CalibrationRecord,
    params: SecurityParams,
) -> ChannelEstimate:
    """Transmittance and excess noise from Alice's symbols x and Bob's recovered symbols y, both in SNU.

    xi_hat is not clamped and may be negative. A block with T_hat = 0 or no residual noise is
    returned with degenerate=True.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise InvalidArgumentError(f"x and y lengths differ: {x.shape} vs {y.shape}.")
    if x.size < MIN_SYMBOLS:
        raise InvalidArgumentError(f"Parameter estimation needs at least {MIN_SYMBOLS} symbols, got {x.size}.")

    m = x.size
    eta, v_el = cal.eta_total, cal.v_el
    energy = float(np.sum(np.abs(x) ** 2))
    t_hat = float(np.sum((np.conj(x) * y).real)) / energy
    T_hat = 2.0 * t_hat * t_hat / eta
    sigma2 = float(np.sum(np.abs(y - t_hat * x) ** 2)) / (2.0 * m)

    degenerate = T_hat == 0.0 or sigma2 <= 1e-12 * float(np.mean(np.abs(y) ** 2))
    num = sigma2 - 1.0 - v_el
    xi_hat = 2.0 * num / (eta * T_hat) if T_hat > 0.0 else math.nan

    z = confidence_z(params.eps_pe)
    t_worst = max(t_hat - z * math.sqrt(sigma2 / energy), 0.0)
    T_worst = min(2.0 * t_worst * t_worst / eta, T_hat)
    # sigma2 averages 2m real Gaussian samples, so its relative standard deviation is 1/sqrt(m)
    num_worst = sigma2 * (1.0 + z / math.sqrt(m)) - 1.0 - v_el
    if T_worst > 0.0:
        # largest xi over the confidence box
        xi_worst = 2.0 * num_worst / (eta * (T_worst if num_worst >= 0.0 else T_hat))
    else:
        xi_worst = math.inf
    if degenerate:
        logger.warning("[security] degenerate estimate: T_hat=%.3g sigma2=%.3g", T_hat, sigma2)
    else:
        logger.debug("[security] T_hat=%.5g xi_hat=%.5g T_worst=%.5g xi_worst=%.5g", T_hat, xi_hat, T_worst, xi_worst)
    return ChannelEstimate(
        t_hat=t_hat,
        T_hat=T_hat,
        xi_hat=xi_hat,
        n_used=m,
        ci_level=params.eps_pe,
        T_worst=T_worst,
        xi_worst=xi_worst,
        sigma2_hat=sigma2,
        degenerate=degenerate,
    )
