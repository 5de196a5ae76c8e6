"""Deterministic miniature corpus generator.

Builds MFA-shaped artifacts (WAV + TextGrid + pipe-delimited metadata) from
synthetic phoneme-wise tones, so ingestion, training and evaluation can run
end to end on a desk without any external recordings.
"""

import math
from pathlib import Path

import numpy as np

from ..textfront import PronunciationLexicon, SIL, g2p, normalize_text
from ..textfront.phonemes import VOWELS
from ..vocoder.wavio import Waveform, write_wav
from .metadata import MetadataRecord, write_metadata_file
from .textgrid import Interval, IntervalTier, format_textgrid

DEFAULT_TEXTS = (
    "Keep an eye on him.",
    "The author keeps a little book.",
    "Good morning to you.",
    "She sings a happy song.",
    "I feel very tired today.",
    "This is a wonderful day.",
    "He walks down to the water.",
    "Please read the story again.",
)

DEFAULT_SPEAKERS = ("bea", "jenie", "josh", "sam")

_BASE_F0 = {"bea": 210.0, "jenie": 185.0, "josh": 125.0, "sam": 110.0}

_EMOTION_F0_SCALE = {
    "amused": 1.15,
    "anger": 1.25,
    "disgust": 0.95,
    "neutral": 1.0,
    "sleepiness": 0.85,
}

_VOICED_CONSONANTS = {
    "B", "D", "G", "JH", "L", "M", "N", "NG", "R", "V", "W", "Y", "Z", "DH", "ZH",
}


def _is_vowel(symbol: str) -> bool:
    return symbol.rstrip("012") in VOWELS


def _phoneme_audio(symbol, duration_s, f0, sample_rate, rng):
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    if symbol == SIL:
        return np.zeros(n)
    if _is_vowel(symbol):
        wave = 0.30 * np.sin(2 * math.pi * f0 * t)
        wave += 0.10 * np.sin(2 * math.pi * 2 * f0 * t)
        wave += 0.03 * np.sin(2 * math.pi * 3 * f0 * t)
        return wave
    if symbol.rstrip("012") in _VOICED_CONSONANTS:
        wave = 0.12 * np.sin(2 * math.pi * f0 * t)
        return wave + 0.02 * rng.standard_normal(n)
    return 0.06 * rng.standard_normal(n)


def synthesize_toy_utterance(phonemes, emotion, speaker, sample_rate, rng):
    """Per-phoneme tone/noise segments plus the matching interval tier."""
    f0 = _BASE_F0.get(speaker, 150.0) * _EMOTION_F0_SCALE[emotion]
    pieces, intervals = [], []
    cursor_samples = 0
    for symbol in phonemes:
        if symbol == SIL:
            duration = 0.1
        elif _is_vowel(symbol):
            duration = float(rng.uniform(0.09, 0.18))
        else:
            duration = float(rng.uniform(0.05, 0.09))
        segment = _phoneme_audio(symbol, duration, f0, sample_rate, rng)
        start = cursor_samples / sample_rate
        cursor_samples += segment.size
        end = cursor_samples / sample_rate
        label = "" if symbol == SIL else symbol
        intervals.append(Interval(label, start, end))
        pieces.append(segment)
    samples = np.concatenate(pieces) if pieces else np.zeros(1)
    return samples, IntervalTier("phones", tuple(intervals))


def generate_toy_corpus(
    out_dir,
    n_utterances: int = 8,
    speakers=DEFAULT_SPEAKERS,
    texts=DEFAULT_TEXTS,
    sample_rate: int = 22050,
    seed: int = 0,
    lexicon: PronunciationLexicon = None,
):
    """Write wavs/, textgrids/ and metadata.txt under out_dir.

    Returns (audio_dir, textgrid_dir, metadata_path). Fully deterministic
    for a given seed.
    """
    rng = np.random.default_rng(seed)
    lexicon = lexicon or PronunciationLexicon.load()
    emotions = tuple(_EMOTION_F0_SCALE)

    out_dir = Path(out_dir)
    audio_dir = out_dir / "wavs"
    textgrid_dir = out_dir / "textgrids"
    audio_dir.mkdir(parents=True, exist_ok=True)
    textgrid_dir.mkdir(parents=True, exist_ok=True)

    records = []
    for i in range(n_utterances):
        text = texts[i % len(texts)]
        speaker = speakers[i % len(speakers)]
        emotion = emotions[i % len(emotions)]
        phoneme_seq = g2p(normalize_text(text), lexicon)
        phonemes = (SIL,) + tuple(phoneme_seq.phonemes) + (SIL,)
        samples, tier = synthesize_toy_utterance(
            phonemes, emotion, speaker, sample_rate, rng
        )
        file_id = f"{emotion}_{i:04d}"
        write_wav(Waveform(samples, sample_rate), audio_dir / f"{file_id}.wav")
        (textgrid_dir / f"{file_id}.TextGrid").write_text(
            format_textgrid([tier]), encoding="utf-8"
        )
        records.append(MetadataRecord(file_id, speaker, phonemes, text, emotion))

    metadata_path = out_dir / "metadata.txt"
    write_metadata_file(records, metadata_path)
    return audio_dir, textgrid_dir, metadata_path
