import math
from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict, Field

from fsoqkd.errors import InvalidArgumentError


class SecurityParams(BaseModel):
    """System parameters entering the key-rate calculation; defaults are the reference operating point."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    va: float = Field(default=8.0, gt=0.0)
    eta: float = Field(default=0.35, gt=0.0, le=1.0)
    v_el: float = Field(default=0.1, ge=0.0)
    beta: float = Field(default=0.95, gt=0.0, le=1.0)
    n_block: int = Field(default=1_000_000, gt=0)
    pe_fraction: float = Field(default=0.5, gt=0.0, lt=1.0)
    fer: float = Field(default=0.1, ge=0.0, lt=1.0)
    eps_pe: float = Field(default=1e-10, gt=0.0, lt=1.0)
    eps_smooth: float = Field(default=1e-10, gt=0.0, lt=1.0)
    symbol_rate: float = Field(default=250e6, gt=0.0)
    pilot_duty: float = Field(default=0.5, gt=0.0, le=1.0)
    calibration_duty: float = Field(default=0.5, gt=0.0, le=1.0)
    pe_duty: float = Field(default=0.5, gt=0.0, le=1.0)
    worst_case: bool = True

    @property
    def key_symbols(self) -> int:
        return int(self.n_block * (1.0 - self.pe_fraction))

    @property
    def pe_symbols(self) -> int:
        return self.n_block - self.key_symbols

    @property
    def duty_chain(self) -> dict[str, float]:
        return {
            "pilot": self.pilot_duty,
            "calibration": self.calibration_duty,
            "parameter_estimation": self.pe_duty,
        }


@dataclass(frozen=True)
class ChannelEstimate:
    """Point estimates and worst-case bounds; xi is referred to the channel input and may be negative."""

    t_hat: float
    T_hat: float
    xi_hat: float
    n_used: int
    ci_level: float
    T_worst: float
    xi_worst: float
    sigma2_hat: float = math.nan
    degenerate: bool = False

    def __post_init__(self):
        if self.n_used <= 0:
            raise InvalidArgumentError(f"n_used must be positive, got {self.n_used}.")
        if self.T_hat < 0:
            raise InvalidArgumentError(f"T_hat must be >= 0, got {self.T_hat}.")

    @classmethod
    def from_point(cls, T: float, xi: float, n_used: int = 1, ci_level: float = 1e-10) -> "ChannelEstimate":
        """Estimate whose worst-case bounds coincide with the given point, for one-shot rate calculations."""
        return cls(
            t_hat=math.nan,
            T_hat=T,
            xi_hat=xi,
            n_used=n_used,
            ci_level=ci_level,
            T_worst=T,
            xi_worst=xi,
        )


@dataclass(frozen=True)
class SkrReport:
    i_ab: float
    chi_be: float
    delta_fs: float
    skr_symbol: float
    skr_bps: float
    skr_raw: float = math.nan
    skr_pe_factored: float = math.nan
    discarded: bool = False
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def discarded_report(cls, reason: str) -> "SkrReport":
        nan = math.nan
        return cls(
            i_ab=nan,
            chi_be=nan,
            delta_fs=nan,
            skr_symbol=0.0,
            skr_bps=0.0,
            skr_raw=nan,
            skr_pe_factored=0.0,
            discarded=True,
            diagnostics={"reason": reason},
        )
