from fsoqkd.dsp.calibration import (
    CalibrationRecord,
    calibrate,
    normalize_to_snu,
    read_calibration,
    write_calibration,
)
from fsoqkd.dsp.chain import DISCARD_SNR_DB, RecoveredBlock, pilot_snr_db, process_block
from fsoqkd.dsp.equalizer import equalize, estimate_gain
from fsoqkd.dsp.frequency import compensate_frequency_offset, estimate_frequency_offset
from fsoqkd.dsp.phase import recover_phase

__all__ = [
    "CalibrationRecord",
    "DISCARD_SNR_DB",
    "RecoveredBlock",
    "calibrate",
    "compensate_frequency_offset",
    "equalize",
    "estimate_frequency_offset",
    "estimate_gain",
    "normalize_to_snu",
    "pilot_snr_db",
    "process_block",
    "read_calibration",
    "recover_phase",
    "write_calibration",
]
