"""Acoustic feature extraction: log-mel spectrograms, frame-wise F0 via
autocorrelation, and spectral energy. Pure numpy/scipy, no audio backends.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.signal import get_window, resample_poly

from ..errors import AudioError


@dataclass(frozen=True)
class FeatureConfig:
    """Front-end signal analysis parameters (22.05 kHz TTS defaults)."""

    sample_rate: int = 22050
    n_fft: int = 1024
    win_length: int = 1024
    hop_length: int = 256
    n_mels: int = 80
    fmin: float = 0.0
    fmax: float = 8000.0
    amp_floor: float = 1e-5
    pitch_fmin: float = 60.0
    pitch_fmax: float = 400.0
    voicing_threshold: float = 0.3

    @property
    def log_floor(self) -> float:
        return math.log(self.amp_floor)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        return cls(**d)


@dataclass(frozen=True)
class MelSpectrogram:
    """Log-amplitude mel spectrogram, frames on axis 0."""

    values: np.ndarray
    sample_rate: int
    hop_length: int

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ValueError("mel values must be a frames x n_mels matrix")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("mel values must be finite")

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]

    @property
    def n_mels(self) -> int:
        return self.values.shape[1]


def _validate_waveform(samples) -> np.ndarray:
    y = np.asarray(samples, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise AudioError("waveform must be a non-empty 1-D array")
    if not np.all(np.isfinite(y)):
        raise AudioError("waveform contains non-finite samples")
    return y


def frame_signal(y: np.ndarray, config: FeatureConfig) -> np.ndarray:
    """Center the signal with reflect padding and slice into analysis frames.

    Frame count is 1 + floor(len/hop), i.e. ~ceil(len/hop), one frame per
    hop centered at t*hop.
    """
    pad = config.n_fft // 2
    padded = np.pad(y, pad, mode="reflect") if y.size > 1 else np.pad(y, pad)
    n_frames = 1 + (padded.size - config.n_fft) // config.hop_length
    windows = np.lib.stride_tricks.sliding_window_view(padded, config.n_fft)
    return windows[:: config.hop_length][:n_frames]


def stft_magnitude(y: np.ndarray, config: FeatureConfig) -> np.ndarray:
    """Magnitude spectrogram, shape [frames, n_fft//2 + 1]."""
    frames = frame_signal(y, config)
    window = get_window("hann", config.win_length, fftbins=True)
    if config.win_length < config.n_fft:
        lpad = (config.n_fft - config.win_length) // 2
        window = np.pad(window, (lpad, config.n_fft - config.win_length - lpad))
    return np.abs(np.fft.rfft(frames * window, axis=1))


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(config: FeatureConfig) -> np.ndarray:
    """Triangular mel filterbank on FFT bin centers, shape [n_mels, bins]."""
    n_bins = config.n_fft // 2 + 1
    fft_freqs = np.linspace(0.0, config.sample_rate / 2.0, n_bins)
    mel_points = np.linspace(
        hz_to_mel(config.fmin), hz_to_mel(config.fmax), config.n_mels + 2
    )
    hz_points = mel_to_hz(mel_points)
    lower, center, upper = hz_points[:-2], hz_points[1:-1], hz_points[2:]
    up = (fft_freqs[None, :] - lower[:, None]) / (center - lower)[:, None]
    down = (upper[:, None] - fft_freqs[None, :]) / (upper - center)[:, None]
    return np.maximum(0.0, np.minimum(up, down))


def mel_band_centers(config: FeatureConfig) -> np.ndarray:
    """Center frequency (Hz) of each mel band."""
    mel_points = np.linspace(
        hz_to_mel(config.fmin), hz_to_mel(config.fmax), config.n_mels + 2
    )
    return mel_to_hz(mel_points)[1:-1]


def extract_mel(samples, config: FeatureConfig) -> MelSpectrogram:
    """Log-compressed amplitude mel spectrogram with a floor clamp."""
    y = _validate_waveform(samples)
    magnitude = stft_magnitude(y, config)
    mel_amp = magnitude @ mel_filterbank(config).T
    values = np.log(np.maximum(mel_amp, config.amp_floor))
    return MelSpectrogram(values, config.sample_rate, config.hop_length)


def extract_energy(samples, config: FeatureConfig) -> np.ndarray:
    """Per-frame L2 norm of the magnitude spectrum."""
    y = _validate_waveform(samples)
    return np.linalg.norm(stft_magnitude(y, config), axis=1)


def extract_pitch(samples, config: FeatureConfig) -> np.ndarray:
    """Per-frame F0 in Hz from the normalized autocorrelation peak.

    Frames whose peak falls below the voicing threshold (or that carry no
    signal) are unvoiced and report 0. Frame centers match extract_mel.
    """
    y = _validate_waveform(samples)
    frames = frame_signal(y, config).astype(np.float64)
    frames = frames - frames.mean(axis=1, keepdims=True)

    lag_min = max(2, int(round(config.sample_rate / config.pitch_fmax)))
    lag_max = min(
        config.n_fft - 2, int(round(config.sample_rate / config.pitch_fmin))
    )
    n_pad = 2 * config.n_fft
    spectrum = np.fft.rfft(frames, n=n_pad, axis=1)
    autocorr = np.fft.irfft(np.abs(spectrum) ** 2, axis=1)[:, : lag_max + 2]

    r0 = autocorr[:, 0]
    search = autocorr[:, lag_min : lag_max + 1]
    peak_offset = np.argmax(search, axis=1)
    peak_lag = peak_offset + lag_min

    f0 = np.zeros(frames.shape[0])
    for t in range(frames.shape[0]):
        if r0[t] <= 1e-12:
            continue
        lag = peak_lag[t]
        if autocorr[t, lag] / r0[t] < config.voicing_threshold:
            continue
        # Parabolic refinement around the integer-lag peak.
        left, mid, right = autocorr[t, lag - 1 : lag + 2]
        denom = left - 2.0 * mid + right
        delta = 0.5 * (left - right) / denom if abs(denom) > 1e-12 else 0.0
        f0[t] = config.sample_rate / (lag + float(np.clip(delta, -0.5, 0.5)))
    return f0


def phoneme_average(values: np.ndarray, durations, voiced_only: bool = False) -> np.ndarray:
    """Average a per-frame track over each phoneme's frame span.

    With voiced_only, only nonzero frames count; a span with none yields 0.
    Zero-duration phonemes yield 0.
    """
    values = np.asarray(values, dtype=np.float64)
    out = np.zeros(len(durations))
    start = 0
    for i, dur in enumerate(durations):
        seg = values[start : start + int(dur)]
        if voiced_only:
            seg = seg[seg > 0]
        if seg.size:
            out[i] = seg.mean()
        start += int(dur)
    return out


def resample(samples, rate_in: int, rate_out: int) -> np.ndarray:
    """Polyphase resampling between integer sample rates."""
    y = _validate_waveform(samples)
    if rate_in == rate_out:
        return y
    g = math.gcd(rate_in, rate_out)
    return resample_poly(y, rate_out // g, rate_in // g)
