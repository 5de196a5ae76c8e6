"""Padded-waveform RMSE between synthesized and natural speech."""

from dataclasses import dataclass

import numpy as np

from ..errors import RateMismatch
from ..vocoder.wavio import Waveform


@dataclass(frozen=True)
class RmseResult:
    rmse: float
    padded: bool
    speaker: str = ""
    emotion: str = ""
    sample_id: str = ""

    def __post_init__(self):
        if self.rmse < 0:
            raise ValueError("rmse must be non-negative")


def rmse_waveforms(
    a: Waveform, b: Waveform, speaker: str = "", emotion: str = "", sample_id: str = ""
) -> RmseResult:
    """RMSE after zero-padding the shorter waveform at the end."""
    if a.sample_rate != b.sample_rate:
        raise RateMismatch(
            f"sample rates differ: {a.sample_rate} vs {b.sample_rate}"
        )
    xa, xb = np.asarray(a.samples, dtype=np.float64), np.asarray(b.samples, dtype=np.float64)
    padded = xa.size != xb.size
    n = max(xa.size, xb.size)
    xa = np.pad(xa, (0, n - xa.size))
    xb = np.pad(xb, (0, n - xb.size))
    value = float(np.sqrt(np.mean((xa - xb) ** 2))) if n else 0.0
    return RmseResult(value, padded, speaker, emotion, sample_id)
