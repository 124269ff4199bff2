from fsoqkd.coex.ngmi import NgmiRow, gmi, ngmi, simulate_ngmi, supports_fec_rate, write_ngmi_csv
from fsoqkd.coex.plan import ClassicalPlan
from fsoqkd.coex.qam import demap_llrs, gray_qam, modulate
from fsoqkd.coex.throughput import classical_throughput, leakage_excess_noise

__all__ = [
    "ClassicalPlan",
    "NgmiRow",
    "classical_throughput",
    "demap_llrs",
    "gmi",
    "gray_qam",
    "leakage_excess_noise",
    "modulate",
    "ngmi",
    "simulate_ngmi",
    "supports_fec_rate",
    "write_ngmi_csv",
]
