"""Per-block key-rate rows as CSV."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from fsoqkd.security.params import ChannelEstimate, SkrReport

SKR_COLUMNS = (
    "block_id",
    "T_hat",
    "xi_hat",
    "T_worst",
    "xi_worst",
    "i_ab",
    "chi_be",
    "delta_fs",
    "skr_symbol",
    "skr_bps",
    "discarded",
    "skr_raw",
    "skr_pe_factored",
    "T_block",
    "pilot_snr_db",
)


@dataclass(frozen=True)
class BlockRow:
    block_id: int
    estimate: ChannelEstimate | None
    report: SkrReport
    T_block: float = math.nan
    pilot_snr_db: float = math.nan

    @property
    def discarded(self) -> bool:
        return self.report.discarded

    def as_dict(self) -> dict[str, object]:
        est, rep = self.estimate, self.report
        nan = math.nan
        return {
            "block_id": self.block_id,
            "T_hat": est.T_hat if est else nan,
            "xi_hat": est.xi_hat if est else nan,
            "T_worst": est.T_worst if est else nan,
            "xi_worst": est.xi_worst if est else nan,
            "i_ab": rep.i_ab,
            "chi_be": rep.chi_be,
            "delta_fs": rep.delta_fs,
            "skr_symbol": rep.skr_symbol,
            "skr_bps": rep.skr_bps,
            "discarded": int(rep.discarded),
            "skr_raw": rep.skr_raw,
            "skr_pe_factored": rep.skr_pe_factored,
            "T_block": self.T_block,
            "pilot_snr_db": self.pilot_snr_db,
        }


def _fmt(value: object) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def write_skr_csv(rows: Iterable[BlockRow], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SKR_COLUMNS)
        for row in sorted(rows, key=lambda r: r.block_id):
            d = row.as_dict()
            writer.writerow([_fmt(d[c]) for c in SKR_COLUMNS])
    return path
