"""Shot-noise and electronic-noise calibration."""

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from fsoqkd.errors import CalibrationError, InvalidArgumentError

logger = logging.getLogger(__name__)

MIN_CAPTURE = 10_000
CLEARANCE_CAP_DB = 99.0


@dataclass(frozen=True)
class CalibrationRecord:
    snu_scale: float
    v_el: float
    clearance_db: float
    eta_total: float

    def __post_init__(self):
        if not self.snu_scale > 0:
            raise InvalidArgumentError(f"snu_scale must be positive, got {self.snu_scale}.")
        if not 0.0 < self.eta_total <= 1.0:
            raise InvalidArgumentError(f"eta_total must lie in (0, 1], got {self.eta_total}.")
        if self.v_el < 0:
            raise InvalidArgumentError(f"v_el must be >= 0, got {self.v_el}.")

    @classmethod
    def from_clearance(cls, clearance_db: float, eta_total: float, snu_scale: float = 1.0) -> "CalibrationRecord":
        v_el = 10.0 ** (-clearance_db / 10.0)
        return cls(snu_scale=snu_scale, v_el=v_el, clearance_db=clearance_db, eta_total=eta_total)


def _quadrature_variance(trace: np.ndarray) -> float:
    trace = np.asarray(trace)
    if np.iscomplexobj(trace):
        return 0.5 * (float(np.var(trace.real)) + float(np.var(trace.imag)))
    return float(np.var(trace))


def calibrate(shot_trace: np.ndarray, elec_trace: np.ndarray, eta_components: Sequence[float]) -> CalibrationRecord:
    """Build a record from a shot-noise capture (LO on) and an electronic-noise capture (LO off).

    Complex captures are treated per quadrature.
    """
    for name, tr in (("shot_trace", shot_trace), ("elec_trace", elec_trace)):
        if np.size(tr) < MIN_CAPTURE:
            raise InvalidArgumentError(f"{name} needs at least {MIN_CAPTURE} samples, got {np.size(tr)}.")
    if not eta_components or any(not 0.0 < e <= 1.0 for e in eta_components):
        raise InvalidArgumentError(f"eta_components must be a non-empty sequence in (0, 1], got {eta_components}.")

    var_shot = _quadrature_variance(shot_trace)
    var_elec = _quadrature_variance(elec_trace)
    if var_shot <= var_elec:
        raise CalibrationError(f"Shot variance {var_shot:.6g} does not exceed electronic variance {var_elec:.6g}.")
    snu = var_shot - var_elec
    v_el = var_elec / snu
    clearance = CLEARANCE_CAP_DB if v_el <= 10.0 ** (-CLEARANCE_CAP_DB / 10.0) else -10.0 * math.log10(v_el)
    record = CalibrationRecord(
        snu_scale=snu, v_el=v_el, clearance_db=clearance, eta_total=float(np.prod(eta_components))
    )
    logger.debug("[dsp] calibration %s", record)
    return record


def normalize_to_snu(symbols: np.ndarray, cal: CalibrationRecord) -> np.ndarray:
    return np.asarray(symbols) / math.sqrt(cal.snu_scale)


def write_calibration(cal: CalibrationRecord, path: str | Path) -> Path:
    path = Path(path)
    path.write_text("".join(f"{k}={v!r}\n" for k, v in asdict(cal).items()))
    return path


def read_calibration(path: str | Path) -> CalibrationRecord:
    values: dict[str, float] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise InvalidArgumentError(f"{path}: malformed line {raw!r}.")
        values[key.strip()] = float(val)
    expected = {"snu_scale", "v_el", "clearance_db", "eta_total"}
    if set(values) != expected:
        raise InvalidArgumentError(f"{path}: expected keys {sorted(expected)}, got {sorted(values)}.")
    return CalibrationRecord(**values)
