import logging
import math

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.security.discrete import holevo_bound_discrete
from fsoqkd.security.gaussian import holevo_bound_gaussian, mutual_information
from fsoqkd.security.params import ChannelEstimate, SecurityParams, SkrReport
from fsoqkd.signal.constellation import Constellation

logger = logging.getLogger(__name__)


def finite_size_penalty(n: float, eps_smooth: float) -> float:
    """Delta(n) = 7 sqrt(log2(2/eps_smooth) / n)."""
    if not n > 0:
        raise InvalidArgumentError(f"n must be positive, got {n}.")
    if not 0.0 < eps_smooth < 1.0:
        raise InvalidArgumentError(f"eps_smooth must lie in (0, 1), got {eps_smooth}.")
    return 7.0 * math.sqrt(math.log2(2.0 / eps_smooth) / n)


def holevo_bound(
    T: float, xi: float, params: SecurityParams, constellation: Constellation | None = None
) -> float:
    """chi_BE at (T, max(xi, 0)).

    Negative excess noise lies outside the physical set; the bound is taken on its boundary xi = 0.
    """
    xi = max(xi, 0.0)
    if constellation is None:
        return holevo_bound_gaussian(params.va, T, xi, params.eta, params.v_el)
    return holevo_bound_discrete(constellation, T, xi, params.eta, params.v_el)


def compute_skr(
    est: ChannelEstimate,
    params: SecurityParams,
    constellation: Constellation | None = None,
) -> SkrReport:
    """Key rate for one block.

    skr_raw = beta*I_AB - chi_BE - Delta, skr_symbol = max(0, (1 - fer) * skr_raw) and
    skr_bps = skr_symbol * symbol_rate * (pilot, calibration, parameter-estimation duties).
    The parameter-estimation fraction enters through Delta(N * (1 - pe_fraction)); skr_pe_factored
    additionally multiplies skr_symbol by (1 - pe_fraction).
    chi_BE is evaluated at max(xi, 0); xi in the estimate stays unclamped.
    """
    if est.degenerate:
        return SkrReport.discarded_report("degenerate channel estimate")

    T_point = min(est.T_hat, 1.0)
    i_ab = mutual_information(params.va, T_point, est.xi_hat, params.eta, params.v_el)
    delta = finite_size_penalty(params.key_symbols, params.eps_smooth)
    T_eve, xi_eve = (est.T_worst, est.xi_worst) if params.worst_case else (est.T_hat, est.xi_hat)
    T_eve = min(T_eve, 1.0)

    if T_eve <= 0.0 or not math.isfinite(xi_eve):
        logger.info("[security] no key: worst-case bounds leave no usable channel (T=%.3g, xi=%.3g)", T_eve, xi_eve)
        return SkrReport(
            i_ab=i_ab,
            chi_be=math.nan,
            delta_fs=delta,
            skr_symbol=0.0,
            skr_bps=0.0,
            skr_raw=-math.inf,
            skr_pe_factored=0.0,
            diagnostics={"reason": "worst-case transmittance is zero"},
        )

    chi = holevo_bound(T_eve, xi_eve, params, constellation)
    raw = params.beta * i_ab - chi - delta
    skr = max(0.0, (1.0 - params.fer) * raw)
    duty = math.prod(params.duty_chain.values())
    if raw <= 0.0:
        logger.debug("[security] key rate clamped at 0 (raw %.4g)", raw)
    return SkrReport(
        i_ab=i_ab,
        chi_be=chi,
        delta_fs=delta,
        skr_symbol=skr,
        skr_bps=skr * params.symbol_rate * duty,
        skr_raw=raw,
        skr_pe_factored=skr * (1.0 - params.pe_fraction),
    )
