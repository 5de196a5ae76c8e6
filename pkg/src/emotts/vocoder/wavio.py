"""16-bit PCM mono WAV reading and writing via the stdlib wave module."""

import wave
from dataclasses import dataclass

import numpy as np

from ..errors import IoError


@dataclass(frozen=True)
class Waveform:
    """Float samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.samples.ndim != 1:
            raise ValueError("waveform must be mono (1-D)")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise ValueError("waveform samples must be finite")

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def __len__(self):
        return self.samples.size


def _write_pcm16(waveform: Waveform, fileobj) -> None:
    clipped = np.clip(waveform.samples, -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype("<i2")
    with wave.open(fileobj, "wb") as f:
        f.setnchannels(1)
        f.setsampwidth(2)
        f.setframerate(waveform.sample_rate)
        f.writeframes(pcm.tobytes())


def write_wav(waveform: Waveform, path) -> None:
    """Write PCM16 mono; refuses zero-length output."""
    if len(waveform) == 0:
        raise IoError(f"refusing to write zero-length WAV to {path}")
    try:
        with open(path, "wb") as f:
            _write_pcm16(waveform, f)
    except (OSError, wave.Error) as exc:
        raise IoError(f"cannot write WAV {path}: {exc}") from exc


def wav_bytes(waveform: Waveform) -> bytes:
    """In-memory PCM16 mono WAV encoding."""
    import io

    if len(waveform) == 0:
        raise IoError("refusing to encode a zero-length WAV")
    buf = io.BytesIO()
    _write_pcm16(waveform, buf)
    return buf.getvalue()


def read_wav(path) -> Waveform:
    """Read a PCM16 WAV; multi-channel input is averaged down to mono."""
    try:
        with wave.open(str(path), "rb") as f:
            n_channels = f.getnchannels()
            width = f.getsampwidth()
            rate = f.getframerate()
            raw = f.readframes(f.getnframes())
    except (OSError, wave.Error, EOFError) as exc:
        raise IoError(f"cannot read WAV {path}: {exc}") from exc
    if width != 2:
        raise IoError(f"{path}: only 16-bit PCM supported, got {8 * width}-bit")
    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    if n_channels > 1:
        data = data.reshape(-1, n_channels).mean(axis=1)
    return Waveform(data, rate)
