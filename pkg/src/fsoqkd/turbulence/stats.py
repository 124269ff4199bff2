import numpy as np

from fsoqkd.errors import InvalidArgumentError
from fsoqkd.turbulence.params import FadeStats, IntensityTrace


def scintillation_index(trace: IntensityTrace) -> float:
    """Var(I)/E[I]^2 with the population variance."""
    trace.require_length(2)
    mean = float(np.mean(trace.samples))
    if mean <= 0.0:
        raise InvalidArgumentError("Scintillation index is undefined for a zero-mean trace.")
    return float(np.var(trace.samples)) / (mean * mean)


def _runs_below(samples: np.ndarray, threshold: float) -> np.ndarray:
    """Lengths of maximal runs with samples < threshold."""
    below = np.concatenate(([False], samples < threshold, [False])).astype(np.int8)
    edges = np.diff(below)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return ends - starts


def fade_stats(trace: IntensityTrace, threshold: float) -> FadeStats:
    if threshold < 0.0:
        raise InvalidArgumentError(f"threshold must be >= 0, got {threshold}.")
    s = trace.samples
    if s.size == 0:
        return FadeStats(outage_fraction=0.0, mean_fade_duration=0.0, n_fades=0)
    runs = _runs_below(s, threshold)
    outage = float(np.count_nonzero(s < threshold)) / s.size
    if runs.size == 0:
        return FadeStats(outage_fraction=outage, mean_fade_duration=0.0, n_fades=0)
    return FadeStats(
        outage_fraction=outage,
        mean_fade_duration=float(runs.mean()) / trace.sample_rate,
        n_fades=int(runs.size),
    )
