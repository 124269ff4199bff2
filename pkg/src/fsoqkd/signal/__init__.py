from fsoqkd.signal.channel import ChannelRealization, apply_channel
from fsoqkd.signal.constellation import (
    Constellation,
    build_constellation,
    constellation_entropy,
    nu_for_entropy,
    read_constellation,
    write_constellation,
)
from fsoqkd.signal.frame import (
    DEFAULT_PILOT_AMPLITUDE,
    DEFAULT_PILOT_RATIO,
    DEFAULT_SYMBOL_RATE,
    QuantumFrame,
    build_frame,
    pilot_alphabet,
)
from fsoqkd.signal.frame_io import read_frame, write_frame
from fsoqkd.signal.pulse import matched_filter, rrc_taps, shape

__all__ = [
    "ChannelRealization",
    "Constellation",
    "DEFAULT_PILOT_AMPLITUDE",
    "DEFAULT_PILOT_RATIO",
    "DEFAULT_SYMBOL_RATE",
    "QuantumFrame",
    "apply_channel",
    "build_constellation",
    "build_frame",
    "constellation_entropy",
    "matched_filter",
    "nu_for_entropy",
    "pilot_alphabet",
    "read_constellation",
    "read_frame",
    "rrc_taps",
    "shape",
    "write_constellation",
    "write_frame",
]
