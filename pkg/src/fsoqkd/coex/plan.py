from pydantic import BaseModel, ConfigDict, Field


class ClassicalPlan(BaseModel):
    """WDM classical channels sharing the free-space link with the quantum channel."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_channels: int = Field(default=15, ge=0)
    baud: float = Field(default=45e9, gt=0.0)
    bits_per_symbol: int = Field(default=6, gt=0)
    fec_rate: float = Field(default=0.8, gt=0.0, le=1.0)
    overall_rate: float = Field(default=0.75, gt=0.0, le=1.0)
    grid_spacing: float = Field(default=50e9, gt=0.0)
    center_freq: float = Field(default=192.4e12, gt=0.0)
    snr_db: float = 17.0
    ngmi_symbols: int = Field(default=10_000, ge=100)
    leak_power: float = Field(default=0.0, ge=0.0)

    @property
    def order(self) -> int:
        return 2**self.bits_per_symbol

    @property
    def center_index(self) -> int:
        return (self.n_channels - 1) // 2 if self.n_channels else 0

