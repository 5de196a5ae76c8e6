"""Inference timing and real-time-factor measurement.

One untimed warmup run precedes the timed repeats; the reported wall time
is the median, which stabilizes desk-scale numbers. Model loading is
excluded; the text frontend and classifier are included.
"""

import statistics
import time
from dataclasses import dataclass

from ..speakers import speaker_gender


@dataclass(frozen=True)
class TimingResult:
    method: str
    speaker: str
    emotion: str
    sample_id: str
    wall_seconds: float
    word_count: int
    audio_seconds: float
    repeats: int

    def __post_init__(self):
        if self.audio_seconds <= 0:
            raise ValueError("timed synthesis must produce audio")
        if self.wall_seconds <= 0:
            raise ValueError("wall time must be positive")

    @property
    def rtf(self) -> float:
        return self.wall_seconds / self.audio_seconds

    @property
    def gender(self) -> str:
        return speaker_gender(self.speaker)


def time_synthesis(synthesizer, request, repeats: int = 3, sample_id: str = "") -> TimingResult:
    """Median wall time over serialized repeats of one synthesis request."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    waveform, diagnostics = synthesizer.synthesize(request)

    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        waveform, diagnostics = synthesizer.synthesize(request)
        times.append(time.perf_counter() - start)

    method = "classifier" if request.is_auto else "manual"
    return TimingResult(
        method=method,
        speaker=request.speaker_id,
        emotion=diagnostics.emotion_name,
        sample_id=sample_id,
        wall_seconds=statistics.median(times),
        word_count=len(request.text.split()),
        audio_seconds=waveform.duration,
        repeats=repeats,
    )
