"""Evaluation protocol: synthesis timing (RTF), padded-waveform RMSE, and
per-speaker/per-emotion report tables.
"""

from .report import (
    REFERENCE_RMSE,
    REFERENCE_RTF,
    REFERENCE_TIMINGS,
    RMSE_COLUMNS,
    RTF_COLUMNS,
    TIMING_COLUMNS,
    emit_report,
    hardware_descriptor,
)
from .rmse import RmseResult, rmse_waveforms
from .timing import TimingResult, time_synthesis

__all__ = [
    "REFERENCE_RMSE",
    "REFERENCE_RTF",
    "REFERENCE_TIMINGS",
    "RMSE_COLUMNS",
    "RTF_COLUMNS",
    "TIMING_COLUMNS",
    "RmseResult",
    "TimingResult",
    "emit_report",
    "hardware_descriptor",
    "rmse_waveforms",
    "time_synthesis",
]
