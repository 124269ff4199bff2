from fsoqkd.coex.plan import ClassicalPlan
from fsoqkd.errors import InvalidArgumentError


def classical_throughput(plan: ClassicalPlan) -> tuple[float, float]:
    """(raw, net) bit/s: n_channels * baud * bits_per_symbol, and raw times the overall code rate."""
    raw = plan.n_channels * plan.baud * plan.bits_per_symbol
    return raw, raw * plan.overall_rate


def leakage_excess_noise(leak_power: float, T: float) -> float:
    """In-band classical leakage referred to the channel input, additive to xi (SNU)."""
    if leak_power < 0:
        raise InvalidArgumentError(f"leak_power must be >= 0, got {leak_power}.")
    if T <= 0:
        raise InvalidArgumentError(f"Transmittance must be positive to refer leakage to the input, got {T}.")
    return leak_power / T
