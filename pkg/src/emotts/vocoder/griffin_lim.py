"""Griffin-Lim mel inversion: pseudo-inverse of the mel filterbank to a
linear magnitude spectrogram, then iterative phase recovery. Always
available; no trained weights required.
"""

import numpy as np

from ..corpus.features import FeatureConfig, MelSpectrogram, mel_filterbank, stft_magnitude
from .wavio import Waveform


def mel_to_linear(mel: MelSpectrogram, config: FeatureConfig) -> np.ndarray:
    """Invert log-mel values to a linear magnitude spectrogram [frames, bins]."""
    amplitudes = np.exp(mel.values)
    linear = amplitudes @ np.linalg.pinv(mel_filterbank(config)).T
    return np.maximum(linear, 0.0)


def _stft_complex(y: np.ndarray, config: FeatureConfig) -> np.ndarray:
    from ..corpus.features import frame_signal
    from scipy.signal import get_window

    window = get_window("hann", config.win_length, fftbins=True)
    return np.fft.rfft(frame_signal(y, config) * window, axis=1)


def _istft(spectrum: np.ndarray, config: FeatureConfig, length: int) -> np.ndarray:
    from scipy.signal import get_window

    window = get_window("hann", config.win_length, fftbins=True)
    frames = np.fft.irfft(spectrum, n=config.n_fft, axis=1)
    pad = config.n_fft // 2
    total = pad * 2 + length
    signal = np.zeros(total)
    weight = np.zeros(total)
    hop = config.hop_length
    for t in range(frames.shape[0]):
        start = t * hop
        end = min(start + config.n_fft, total)
        span = end - start
        if span <= 0:
            break
        signal[start:end] += frames[t, :span] * window[:span]
        weight[start:end] += window[:span] ** 2
    signal = signal / np.maximum(weight, 1e-10)
    return signal[pad : pad + length]


def griffin_lim(
    mel: MelSpectrogram, config: FeatureConfig = None, iterations: int = 32
) -> Waveform:
    """Reconstruct a waveform whose length is frames * hop_length.

    Starts from zero phase (deterministic) and alternates between the
    magnitude constraint and a consistent STFT phase estimate.
    """
    if config is None:
        config = FeatureConfig(
            sample_rate=mel.sample_rate, hop_length=mel.hop_length, n_mels=mel.n_mels
        )
    magnitude = mel_to_linear(mel, config)
    length = mel.num_frames * config.hop_length

    spectrum = magnitude.astype(np.complex128)
    signal = _istft(spectrum, config, length)
    for _ in range(max(0, int(iterations))):
        phase = np.angle(_stft_complex(signal, config))
        n = min(phase.shape[0], magnitude.shape[0])
        spectrum = magnitude[:n] * np.exp(1j * phase[:n])
        signal = _istft(spectrum, config, length)
    peak = np.max(np.abs(signal)) if signal.size else 0.0
    if peak > 1.0:
        signal = signal / peak
    return Waveform(signal, config.sample_rate)


def spectral_convergence(waveform: Waveform, magnitude: np.ndarray, config: FeatureConfig) -> float:
    """Relative Frobenius distance between a signal's magnitude STFT and a
    target magnitude; the Griffin-Lim residual measure."""
    actual = stft_magnitude(waveform.samples, config)
    n = min(actual.shape[0], magnitude.shape[0])
    target = magnitude[:n]
    denom = np.linalg.norm(target)
    if denom == 0:
        return float(np.linalg.norm(actual[:n]))
    return float(np.linalg.norm(actual[:n] - target) / denom)
