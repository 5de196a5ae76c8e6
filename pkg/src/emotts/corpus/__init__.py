"""Corpus ingestion: TextGrid alignment artifacts, pipe-delimited metadata,
and audio feature extraction into aligned training examples.
"""

from .dataset import (
    AlignedUtterance,
    FeatureStats,
    align_utterance,
    build_dataset,
    compute_stats,
    lint_silence,
    load_dataset,
    phones_tier,
    save_dataset,
)
from .features import (
    FeatureConfig,
    MelSpectrogram,
    extract_energy,
    extract_mel,
    extract_pitch,
    frame_signal,
    hz_to_mel,
    mel_band_centers,
    mel_filterbank,
    mel_to_hz,
    phoneme_average,
    resample,
    stft_magnitude,
)
from .metadata import (
    MetadataRecord,
    parse_metadata_line,
    read_metadata_file,
    serialize_metadata,
    write_metadata_file,
)
from .textgrid import (
    Interval,
    IntervalTier,
    format_textgrid,
    intervals_to_frame_durations,
    parse_textgrid,
)
from .toycorpus import generate_toy_corpus

__all__ = [
    "AlignedUtterance",
    "FeatureConfig",
    "FeatureStats",
    "Interval",
    "IntervalTier",
    "MelSpectrogram",
    "MetadataRecord",
    "align_utterance",
    "build_dataset",
    "compute_stats",
    "extract_energy",
    "extract_mel",
    "extract_pitch",
    "format_textgrid",
    "frame_signal",
    "generate_toy_corpus",
    "hz_to_mel",
    "intervals_to_frame_durations",
    "lint_silence",
    "phones_tier",
    "load_dataset",
    "mel_band_centers",
    "mel_filterbank",
    "mel_to_hz",
    "parse_metadata_line",
    "parse_textgrid",
    "phoneme_average",
    "read_metadata_file",
    "resample",
    "save_dataset",
    "serialize_metadata",
    "stft_magnitude",
    "write_metadata_file",
]
