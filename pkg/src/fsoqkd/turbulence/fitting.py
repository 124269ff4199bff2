"""Maximum-likelihood fit of the combined intensity model to a measured or synthetic trace.

a0 and the log-normal log-mean only enter through their product, so the free parameters are
(sigma2_ln, gamma, mean_intensity); a0 is carried over from the initial guess.
"""

import logging
import math

import numpy as np
from scipy.optimize import minimize
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from fsoqkd.errors import FitConvergenceError, NumericalError
from fsoqkd.turbulence.density import combined_cdf, combined_pdf
from fsoqkd.turbulence.params import IntensityTrace, TurbulenceFit, TurbulenceParams

logger = logging.getLogger(__name__)

SIGMA2_BOUNDS = (1e-10, 10.0)
GAMMA_BOUNDS = (0.05, 1e4)
EXACT_LIKELIHOOD_MAX = 100_000
RECOMMENDED_MIN_SAMPLES = 10_000


def _unpack(theta: np.ndarray) -> tuple[float, float, float]:
    s2 = float(np.clip(math.exp(theta[0]), *SIGMA2_BOUNDS))
    gamma = float(np.clip(math.exp(theta[1]), *GAMMA_BOUNDS))
    return s2, gamma, math.exp(theta[2])


def _with(init: TurbulenceParams, sigma2_ln: float, gamma: float, mean: float) -> TurbulenceParams:
    return TurbulenceParams(**{**init.model_dump(), "sigma2_ln": sigma2_ln, "gamma": gamma, "mean_intensity": mean})


def _binned_nll(samples: np.ndarray, n_bins: int):
    positive = samples[samples > 0.0]
    lo, hi = positive.min() * (1.0 - 1e-9), samples.max() * (1.0 + 1e-9)
    interior = np.geomspace(lo, hi, n_bins + 1)[1:-1]
    counts = np.bincount(np.searchsorted(interior, samples, side="right"), minlength=n_bins)
    used = counts > 0

    def nll(params: TurbulenceParams) -> float:
        cdf = np.concatenate(([0.0], combined_cdf(interior, params), [1.0]))
        p = np.maximum(np.diff(cdf), 1e-300)
        return float(-np.sum(counts[used] * np.log(p[used])))

    return nll


def _exact_nll(samples: np.ndarray, n_nodes: int = 400):
    positive = samples[samples > 0.0]
    grid = np.geomspace(positive.min() * 0.999, samples.max() * 1.001, n_nodes)
    log_s = np.log(np.maximum(samples, 1e-300))

    def nll(params: TurbulenceParams) -> float:
        log_f = np.log(np.maximum(combined_pdf(grid, params), 1e-300))
        return float(-np.sum(np.interp(log_s, np.log(grid), log_f)))

    return nll


def fit_params(
    trace: IntensityTrace,
    init: TurbulenceParams,
    max_iter: int = 2000,
    n_bins: int = 120,
    restarts: int = 3,
) -> TurbulenceFit:
    """Nelder-Mead MLE of (sigma2_ln, gamma, mean) under combined_pdf.

    Traces longer than 1e5 samples use a log-binned histogram likelihood. Non-convergence restarts
    from the best point up to `restarts` times, then raises FitConvergenceError with that point.
    """
    trace.require_length(2)
    s = trace.samples
    if s.size < RECOMMENDED_MIN_SAMPLES:
        logger.warning("[turbulence] fitting %d samples; at least %d recommended", s.size, RECOMMENDED_MIN_SAMPLES)
    mean = float(np.mean(s))
    if mean <= 0.0 or np.ptp(s) <= 1e-12 * mean:
        logger.warning("[turbulence] trace is constant; returning the degenerate limit")
        return TurbulenceFit(
            params=_with(init, 0.0, GAMMA_BOUNDS[1], max(mean, 1e-300)),
            nll=float("nan"),
            converged=False,
            likelihood="degenerate",
            diagnostics={"reason": "constant trace"},
        )

    exact = s.size <= EXACT_LIKELIHOOD_MAX
    likelihood = "exact" if exact else "binned"
    model_nll = _exact_nll(s) if exact else _binned_nll(s, n_bins)

    log_lo = np.log([SIGMA2_BOUNDS[0], GAMMA_BOUNDS[0]])
    log_hi = np.log([SIGMA2_BOUNDS[1], GAMMA_BOUNDS[1]])

    def objective(theta: np.ndarray) -> float:
        # keeps the simplex from drifting along flat directions outside the bounds
        excess = np.maximum(theta[:2] - log_hi, 0.0) + np.maximum(log_lo - theta[:2], 0.0)
        penalty = 1e3 * float(np.sum(excess * excess))
        try:
            return model_nll(_with(init, *_unpack(theta))) + penalty
        except NumericalError as e:
            logger.debug("[turbulence] objective failed at %s: %s", theta, e)
            return math.inf

    state = {"x0": np.log([max(init.sigma2_ln, 1e-4), init.gamma, mean]), "attempt": 0}

    @retry(stop=stop_after_attempt(max(restarts, 1)), retry=retry_if_exception_type(FitConvergenceError), reraise=True)
    def _attempt():
        state["attempt"] += 1
        res = minimize(
            objective,
            state["x0"],
            method="Nelder-Mead",
            options={"maxiter": max_iter, "xatol": 1e-4, "fatol": 1e-3, "adaptive": True},
        )
        if not res.success or not np.isfinite(res.fun):
            state["x0"] = res.x
            logger.info("[turbulence] attempt %d did not converge: %s", state["attempt"], res.message)
            raise FitConvergenceError(
                f"Nelder-Mead did not converge: {res.message}",
                best_params=_with(init, *_unpack(res.x)),
                nll=float(res.fun),
                diagnostics={"n_iter": int(res.nit), "attempts": state["attempt"]},
            )
        return res

    res = _attempt()
    params = _with(init, *_unpack(res.x))
    logger.info(
        "[turbulence] fit converged (%s) sigma2_ln=%.5g gamma=%.5g mean=%.5g nll=%.6g",
        likelihood,
        params.sigma2_ln,
        params.gamma,
        params.mean_intensity,
        res.fun,
    )
    return TurbulenceFit(
        params=params,
        nll=float(res.fun),
        converged=True,
        n_iter=int(res.nit),
        likelihood=likelihood,
        diagnostics={"attempts": state["attempt"]},
    )
