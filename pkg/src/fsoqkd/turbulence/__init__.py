from fsoqkd.turbulence.density import (
    TurbulenceMoments,
    analytic_moments,
    combined_cdf,
    combined_pdf,
    outage_probability,
    pointing_cdf,
    pointing_pdf,
)
from fsoqkd.turbulence.fitting import fit_params
from fsoqkd.turbulence.params import (
    PRESET_TABLE,
    FadeStats,
    IntensityTrace,
    TurbulenceFit,
    TurbulenceParams,
    preset,
    preset_capture_count,
    preset_reported_si,
)
from fsoqkd.turbulence.process import sample_capture_trace, sample_trace
from fsoqkd.turbulence.stats import fade_stats, scintillation_index
from fsoqkd.turbulence.trace_io import (
    read_trace,
    read_trace_binary,
    read_trace_text,
    write_trace_binary,
    write_trace_text,
)

__all__ = [
    "PRESET_TABLE",
    "FadeStats",
    "IntensityTrace",
    "TurbulenceFit",
    "TurbulenceMoments",
    "TurbulenceParams",
    "analytic_moments",
    "combined_cdf",
    "combined_pdf",
    "fade_stats",
    "fit_params",
    "outage_probability",
    "pointing_cdf",
    "pointing_pdf",
    "preset",
    "preset_capture_count",
    "preset_reported_si",
    "read_trace",
    "read_trace_binary",
    "read_trace_text",
    "sample_capture_trace",
    "sample_trace",
    "scintillation_index",
    "write_trace_binary",
    "write_trace_text",
]
