"""Distribution summaries of per-block results (medians, quartiles, 1.5*IQR outliers)."""

import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from fsoqkd.coex.ngmi import DEFAULT_FEC_RATE, NgmiRow, supports_fec_rate
from fsoqkd.security.report_io import BlockRow


def box_stats(values: Sequence[float]) -> dict[str, float | int]:
    v = np.asarray(values, dtype=np.float64)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return {"median": math.nan, "p25": math.nan, "p75": math.nan, "iqr": math.nan, "n_outliers": 0}
    p25, med, p75 = np.percentile(v, [25, 50, 75])
    iqr = p75 - p25
    outliers = int(np.count_nonzero((v < p25 - 1.5 * iqr) | (v > p75 + 1.5 * iqr)))
    return {"median": float(med), "p25": float(p25), "p75": float(p75), "iqr": float(iqr), "n_outliers": outliers}


def summarize(
    rows: Sequence[BlockRow],
    ngmi_rows: Sequence[NgmiRow] = (),
    duty_chain: dict[str, float] | None = None,
    symbol_rate: float = 250e6,
    fec_rate: float = DEFAULT_FEC_RATE,
) -> dict[str, Any]:
    """Summary of a run. With every block discarded the statistics are null and `empty` is true."""
    duty_chain = dict(duty_chain or {})
    kept = [r for r in rows if not r.discarded]
    summary: dict[str, Any] = {
        "n_blocks": len(rows),
        "n_discarded": len(rows) - len(kept),
        "discard_fraction": (len(rows) - len(kept)) / len(rows) if rows else 0.0,
        "duty_chain": duty_chain,
        "empty": not kept,
    }
    if ngmi_rows:
        values = [r.ngmi for r in ngmi_rows]
        summary["median_ngmi"] = float(np.median(values))
        summary["fec_supported_fraction"] = float(np.mean([supports_fec_rate(v, fec_rate) for v in values]))
    if not kept:
        for key in (
            "median_T",
            "iqr_T",
            "median_skr_symbol",
            "iqr_skr",
            "mean_xi",
            "skr_bps_median",
            "skr_raw_median",
            "skr_bps_raw_median",
        ):
            summary[key] = None
        return summary

    t = box_stats([r.estimate.T_hat for r in kept])
    skr = box_stats([r.report.skr_symbol for r in kept])
    raw = np.array([r.report.skr_raw for r in kept])
    raw_duty = duty_chain.get("pilot", 1.0) * duty_chain.get("calibration", 1.0)
    summary.update(
        {
            "median_T": t["median"],
            "iqr_T": t["iqr"],
            "p25_T": t["p25"],
            "p75_T": t["p75"],
            "outliers_T": t["n_outliers"],
            "median_skr_symbol": skr["median"],
            "iqr_skr": skr["iqr"],
            "p25_skr": skr["p25"],
            "p75_skr": skr["p75"],
            "outliers_skr": skr["n_outliers"],
            "mean_xi": float(np.mean([r.estimate.xi_hat for r in kept])),
            "skr_bps_median": float(np.median([r.report.skr_bps for r in kept])),
            "skr_raw_median": float(np.median(raw)),
            "skr_bps_raw_median": float(np.median(raw)) * symbol_rate * raw_duty,
        }
    )
    return summary


def _pct(base: float | None, other: float | None) -> float | None:
    if base is None or other is None or base == 0:
        return None
    return 100.0 * (other - base) / base


def compare_summaries(base: dict[str, Any], other: dict[str, Any]) -> dict[str, float | None]:
    """Relative change of `other` against `base` in percent."""
    return {
        "median_T_change_pct": _pct(base.get("median_T"), other.get("median_T")),
        "median_skr_change_pct": _pct(base.get("median_skr_symbol"), other.get("median_skr_symbol")),
        "discard_fraction_change": other.get("discard_fraction", 0.0) - base.get("discard_fraction", 0.0),
    }


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    return value


def write_summary(summary: dict[str, Any], path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(summary), indent=2, sort_keys=True) + "\n")
    return path


def read_summary(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())
