"""Mel-to-waveform conversion: Griffin-Lim reference path, a feed-forward
GAN-style generator with loadable weights, and PCM16 WAV I/O.
"""

from .generator import (
    GeneratorConfig,
    MelGenerator,
    hifigan_generate,
    import_official_state,
    load_generator,
    save_generator,
)
from .griffin_lim import griffin_lim, mel_to_linear, spectral_convergence
from .wavio import Waveform, read_wav, wav_bytes, write_wav

__all__ = [
    "GeneratorConfig",
    "MelGenerator",
    "Waveform",
    "griffin_lim",
    "hifigan_generate",
    "import_official_state",
    "load_generator",
    "mel_to_linear",
    "read_wav",
    "wav_bytes",
    "save_generator",
    "spectral_convergence",
    "write_wav",
]
