from fsoqkd.security.covariance import holevo_from_covariance, holevo_numeric_oracle, symplectic_spectrum
from fsoqkd.security.discrete import correlation_coefficient, holevo_bound_discrete
from fsoqkd.security.entropy import g_entropy
from fsoqkd.security.estimation import confidence_z, estimate_channel
from fsoqkd.security.gaussian import holevo_bound_gaussian, mutual_information
from fsoqkd.security.keyrate import compute_skr, finite_size_penalty, holevo_bound
from fsoqkd.security.params import ChannelEstimate, SecurityParams, SkrReport
from fsoqkd.security.report_io import SKR_COLUMNS, BlockRow, write_skr_csv

__all__ = [
    "BlockRow",
    "ChannelEstimate",
    "SKR_COLUMNS",
    "SecurityParams",
    "SkrReport",
    "compute_skr",
    "confidence_z",
    "correlation_coefficient",
    "estimate_channel",
    "finite_size_penalty",
    "g_entropy",
    "holevo_bound",
    "holevo_bound_discrete",
    "holevo_bound_gaussian",
    "holevo_from_covariance",
    "holevo_numeric_oracle",
    "mutual_information",
    "symplectic_spectrum",
    "write_skr_csv",
]
