"""Scenario configuration: TOML file, FSOQKD_* environment variables and CLI overrides.

Precedence, highest first: CLI overrides, the config file, the environment, model defaults.
Unknown keys anywhere are rejected.
"""

import logging
import math
import tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict, TomlConfigSettingsSource

from fsoqkd.coex.plan import ClassicalPlan
from fsoqkd.dsp.calibration import CalibrationRecord
from fsoqkd.dsp.phase import DEFAULT_WINDOW
from fsoqkd.errors import ConfigError, FsoQkdError
from fsoqkd.security.params import SecurityParams
from fsoqkd.turbulence.params import PRESET_TABLE, TurbulenceParams, preset, preset_capture_count

logger = logging.getLogger(__name__)

PRESET_OFF = "off"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class TurbulenceSection(_Section):
    """Explicit model parameters; when set they replace the named preset."""

    sigma2_ln: float | None = Field(default=None, ge=0.0)
    gamma: float | None = Field(default=None, gt=0.0)
    a0: float = Field(default=1.0, gt=0.0)
    mean_intensity: float = Field(default=1.0, gt=0.0)
    tau_corr_ln: float = Field(default=10e-3, gt=0.0)
    tau_corr_pe: float = Field(default=10e-3, gt=0.0)
    trace_rate: float = Field(default=100e3, gt=0.0)
    capture_interval: float | None = Field(default=None, gt=0.0)
    # "peak": unit peak collection, so pointing loss lowers the mean; "mean": mean_intensity as given
    normalization: Literal["mean", "peak"] = "mean"

    @model_validator(mode="after")
    def _both_or_neither(self):
        if (self.sigma2_ln is None) != (self.gamma is None):
            raise ValueError("sigma2_ln and gamma must be given together")
        return self

    @property
    def explicit(self) -> bool:
        return self.sigma2_ln is not None

    def params(self) -> TurbulenceParams:
        return TurbulenceParams(
            sigma2_ln=self.sigma2_ln,
            gamma=self.gamma,
            a0=self.a0,
            mean_intensity=self.mean_intensity,
            tau_corr_ln=self.tau_corr_ln,
            tau_corr_pe=self.tau_corr_pe,
        )


class ChannelSection(_Section):
    transmittance: float = Field(default=0.444, gt=0.0, le=1.0)
    xi_injected: float = Field(default=0.0048, ge=0.0)
    freq_offset: float = 0.0
    # residual after carrier locking; the free-running 200 kHz lasers need a dedicated phase tracker
    linewidth_total: float = Field(default=0.0, ge=0.0)
    oversampled: bool = False


class SecuritySection(_Section):
    va: float = Field(default=8.0, gt=0.0)
    eta: float = Field(default=0.35, gt=0.0, le=1.0)
    clearance_db: float = Field(default=10.0, gt=0.0)
    beta: float = Field(default=0.95, gt=0.0, le=1.0)
    fer: float = Field(default=0.1, ge=0.0, lt=1.0)
    # share of each block spent on parameter estimation; the duty factor for bits/s is [duty]
    pe_fraction: float = Field(default=0.5, gt=0.0, lt=1.0)
    eps_pe: float = Field(default=1e-10, gt=0.0, lt=1.0)
    eps_smooth: float = Field(default=1e-10, gt=0.0, lt=1.0)
    worst_case: bool = True
    bound: Literal["gaussian", "discrete"] = "gaussian"
    constellation_order: Literal[4, 16, 64, 256] = 256
    entropy_bits: float = Field(default=6.0, gt=0.0)

    @property
    def v_el(self) -> float:
        return 10.0 ** (-self.clearance_db / 10.0)


class DutySection(_Section):
    pilot: float = Field(default=0.5, gt=0.0, le=1.0)
    calibration: float = Field(default=0.5, gt=0.0, le=1.0)
    parameter_estimation: float = Field(default=0.5, gt=0.0, le=1.0)


class DspSection(_Section):
    phase_window: int = Field(default=DEFAULT_WINDOW, ge=1)
    n_taps: int = Field(default=1, ge=1)
    estimate_offset: bool = True
    discard_snr_db: float = 3.0
    calibration_samples: int = Field(default=0, ge=0)
    snu_scale: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _capture_length(self):
        if 0 < self.calibration_samples < 10_000:
            raise ValueError("calibration_samples must be 0 (ideal calibration) or at least 10000")
        return self


class OutputSection(_Section):
    dir: Path = Path("out")
    skr_csv: str = "skr.csv"
    ngmi_csv: str = "ngmi.csv"
    summary_json: str = "summary.json"


class ScenarioConfig(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="FSOQKD_",
        env_nested_delimiter="__",
        extra="forbid",
        frozen=True,
    )

    preset: str = "A"
    n_blocks: int | Literal["paper"] = 48
    block_symbols: int = Field(default=1_000_000, ge=10_000)
    symbol_rate: float = Field(default=250e6, gt=0.0)
    pilot_ratio: float = Field(default=0.5, gt=0.0, lt=1.0)
    pilot_amplitude: float = Field(default=math.sqrt(20.0), gt=0.0)
    master_seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)

    turbulence: TurbulenceSection = TurbulenceSection()
    channel: ChannelSection = ChannelSection()
    security: SecuritySection = SecuritySection()
    duty: DutySection = DutySection()
    dsp: DspSection = DspSection()
    classical: ClassicalPlan | None = None
    output: OutputSection = OutputSection()

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        # .env is loaded into the process environment by the CLI before parsing
        return init_settings, env_settings

    @model_validator(mode="after")
    def _check(self):
        name = self.preset.strip()
        if name.lower() != PRESET_OFF and name.upper() not in PRESET_TABLE:
            raise ValueError(f"preset must be one of {sorted(PRESET_TABLE)} or '{PRESET_OFF}', got {self.preset!r}")
        if self.n_blocks == "paper" and name.lower() == PRESET_OFF:
            raise ValueError("n_blocks = 'paper' needs a named preset")
        if isinstance(self.n_blocks, int) and self.n_blocks < 1:
            raise ValueError("n_blocks must be >= 1")
        return self

    @property
    def turbulence_enabled(self) -> bool:
        return self.turbulence.explicit or self.preset.strip().lower() != PRESET_OFF

    def turbulence_params(self) -> TurbulenceParams | None:
        t = self.turbulence
        if t.explicit:
            params = t.params()
        elif not self.turbulence_enabled:
            return None
        else:
            params = preset(self.preset).model_copy(
                update={
                    "mean_intensity": t.mean_intensity,
                    "tau_corr_ln": t.tau_corr_ln,
                    "tau_corr_pe": t.tau_corr_pe,
                }
            )
        if t.normalization == "peak":
            params = params.model_copy(update={"mean_intensity": params.mean_intensity * params.pointing_mean})
        return params

    @property
    def block_count(self) -> int:
        return preset_capture_count(self.preset) if self.n_blocks == "paper" else int(self.n_blocks)

    @property
    def block_duration(self) -> float:
        return self.block_symbols / self.symbol_rate

    @property
    def frame_symbols(self) -> int:
        return int(round(self.block_symbols / (1.0 - self.pilot_ratio)))

    def security_params(self) -> SecurityParams:
        s = self.security
        return SecurityParams(
            va=s.va,
            eta=s.eta,
            v_el=s.v_el,
            beta=s.beta,
            n_block=self.block_symbols,
            pe_fraction=s.pe_fraction,
            fer=s.fer,
            eps_pe=s.eps_pe,
            eps_smooth=s.eps_smooth,
            symbol_rate=self.symbol_rate,
            pilot_duty=self.duty.pilot,
            calibration_duty=self.duty.calibration,
            pe_duty=self.duty.parameter_estimation,
            worst_case=s.worst_case,
        )

    def calibration_record(self) -> CalibrationRecord:
        return CalibrationRecord.from_clearance(
            self.security.clearance_db, self.security.eta, snu_scale=self.dsp.snu_scale
        )


def _deep_merge(base: dict[str, Any], update: dict[str, Any]) -> dict[str, Any]:
    out = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def read_config_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file {path} does not exist.")
    try:
        return TomlConfigSettingsSource(ScenarioConfig, toml_file=path)()
    except (tomllib.TOMLDecodeError, OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e


def load_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> ScenarioConfig:
    """Build a validated ScenarioConfig; any validation problem becomes ConfigError."""
    values = read_config_file(path) if path is not None else {}
    values = _deep_merge(values, {k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        config = ScenarioConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    except FsoQkdError as e:
        raise ConfigError(str(e)) from e
    logger.info("[config] preset=%s blocks=%s seed=%d", config.preset, config.n_blocks, config.master_seed)
    return config
