"""Corpus ingestion: match metadata records with audio + TextGrid assets and
produce frame-aligned training features, persisted as an on-disk manifest.

Manifest layout (documented in docs/FORMATS.md):
    <dir>/index.json          records, feature config, stats, file table
    <dir>/feats/<file_id>.npz durations, mel, pitch, energy arrays
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import AlignmentMismatch, DataError, MissingAsset
from ..textfront.phonemes import SIL
from ..vocoder.wavio import read_wav
from .features import (
    FeatureConfig,
    MelSpectrogram,
    extract_energy,
    extract_mel,
    extract_pitch,
    resample,
)
from .metadata import MetadataRecord, read_metadata_file, serialize_metadata, parse_metadata_line
from .textgrid import IntervalTier, intervals_to_frame_durations, parse_textgrid

MANIFEST_VERSION = 1

# At most this many frames of hop-rounding slack are reconciled by
# trimming/padding; larger gaps indicate a real alignment problem.
FRAME_SLACK = 2

_SILENCE_LABELS = {"", "sil", "sp", "spn", "silence"}


@dataclass(frozen=True)
class AlignedUtterance:
    record: MetadataRecord
    durations_frames: tuple
    mel: MelSpectrogram
    pitch: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        total = int(sum(self.durations_frames))
        if any(d < 0 for d in self.durations_frames):
            raise ValueError("negative frame duration")
        if len(self.durations_frames) != len(self.record.phonemes):
            raise ValueError("one duration per phoneme required")
        if not (total == self.mel.num_frames == len(self.pitch) == len(self.energy)):
            raise ValueError(
                f"frame counts disagree: durations {total}, mel {self.mel.num_frames}, "
                f"pitch {len(self.pitch)}, energy {len(self.energy)}"
            )

    @property
    def num_frames(self) -> int:
        return self.mel.num_frames


@dataclass(frozen=True)
class FeatureStats:
    """Per-corpus pitch/energy statistics for target normalization."""

    pitch_min: float
    pitch_max: float
    pitch_mean: float
    pitch_std: float
    energy_min: float
    energy_max: float
    energy_mean: float
    energy_std: float

    def to_dict(self) -> dict:
        return self.__dict__.copy()

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureStats":
        return cls(**d)


def compute_stats(utterances) -> FeatureStats:
    """Voiced-frame pitch stats and all-frame energy stats."""
    pitch = np.concatenate([u.pitch for u in utterances])
    energy = np.concatenate([u.energy for u in utterances])
    voiced = pitch[pitch > 0]
    if voiced.size == 0:
        voiced = np.array([0.0, 1.0])
    p_std = float(voiced.std()) or 1.0
    e_std = float(energy.std()) or 1.0
    return FeatureStats(
        pitch_min=float(voiced.min()),
        pitch_max=float(voiced.max()),
        pitch_mean=float(voiced.mean()),
        pitch_std=p_std,
        energy_min=float(energy.min()),
        energy_max=float(energy.max()),
        energy_mean=float(energy.mean()),
        energy_std=e_std,
    )


def phones_tier(tiers) -> IntervalTier:
    """The phones interval tier of a parsed TextGrid."""
    for tier in tiers:
        if tier.name.lower() in ("phones", "phone", "phonemes"):
            return tier
    raise AlignmentMismatch("TextGrid has no phones tier")


def _tier_symbols(tier: IntervalTier) -> list:
    return [
        SIL if iv.label.lower() in _SILENCE_LABELS else iv.label
        for iv in tier.intervals
    ]


def align_utterance(
    record: MetadataRecord,
    tier: IntervalTier,
    samples: np.ndarray,
    config: FeatureConfig,
) -> AlignedUtterance:
    """Extract features and reconcile mel frames with forced-aligned durations."""
    symbols = _tier_symbols(tier)
    if tuple(symbols) != tuple(record.phonemes):
        raise AlignmentMismatch(
            f"{record.file_id}: TextGrid phones {symbols} do not match metadata "
            f"phonemes {list(record.phonemes)}"
        )
    durations = intervals_to_frame_durations(tier, config.sample_rate, config.hop_length)
    target = int(sum(durations))

    mel = extract_mel(samples, config)
    pitch = extract_pitch(samples, config)
    energy = extract_energy(samples, config)

    slack = mel.num_frames - target
    if abs(slack) > FRAME_SLACK:
        raise AlignmentMismatch(
            f"{record.file_id}: {mel.num_frames} mel frames vs {target} aligned "
            f"frames exceeds the {FRAME_SLACK}-frame slack"
        )
    values = mel.values
    if slack > 0:
        values, pitch, energy = values[:target], pitch[:target], energy[:target]
    elif slack < 0:
        values = np.pad(values, ((0, -slack), (0, 0)), constant_values=config.log_floor)
        pitch = np.pad(pitch, (0, -slack))
        energy = np.pad(energy, (0, -slack))
    mel = MelSpectrogram(values, mel.sample_rate, mel.hop_length)
    return AlignedUtterance(record, tuple(durations), mel, pitch, energy)


def lint_silence(tier: IntervalTier, threshold: float = 0.3) -> list:
    """Flag long leading/trailing silences that degrade alignment quality."""
    notes = []
    if len(tier) == 0:
        return notes
    first, last = tier.intervals[0], tier.intervals[-1]
    if first.label.lower() in _SILENCE_LABELS and first.duration > threshold:
        notes.append(f"leading silence of {first.duration:.2f}s")
    if last.label.lower() in _SILENCE_LABELS and last.duration > threshold:
        notes.append(f"trailing silence of {last.duration:.2f}s")
    return notes


def build_dataset(
    audio_dir,
    textgrid_dir,
    metadata_file,
    config: FeatureConfig,
    workers: int = 4,
) -> list:
    """Ingest a corpus directory triple into AlignedUtterances.

    Missing audio/TextGrid assets are collected across all records before a
    single MissingAsset is raised; alignment failures raise
    AlignmentMismatch naming the records.
    """
    audio_dir, textgrid_dir = Path(audio_dir), Path(textgrid_dir)
    records = read_metadata_file(metadata_file)

    missing = []
    jobs = []
    for record in records:
        wav_path = audio_dir / f"{record.file_id}.wav"
        tg_path = textgrid_dir / f"{record.file_id}.TextGrid"
        lost = [str(p) for p in (wav_path, tg_path) if not p.exists()]
        if lost:
            missing.append(record.file_id)
        else:
            jobs.append((record, wav_path, tg_path))
    if missing:
        raise MissingAsset(missing)

    def process(job):
        record, wav_path, tg_path = job
        waveform = read_wav(wav_path)
        samples = waveform.samples
        if waveform.sample_rate != config.sample_rate:
            samples = resample(samples, waveform.sample_rate, config.sample_rate)
        tier = phones_tier(parse_textgrid(tg_path.read_text(encoding="utf-8")))
        return align_utterance(record, tier, samples, config)

    mismatches = []
    utterances = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for job, result in zip(jobs, pool.map(_safe(process), jobs)):
            if isinstance(result, AlignmentMismatch):
                mismatches.append(str(result))
            else:
                utterances.append(result)
    if mismatches:
        raise AlignmentMismatch("; ".join(mismatches))
    return utterances


def _safe(fn):
    def wrapped(job):
        try:
            return fn(job)
        except AlignmentMismatch as exc:
            return exc

    return wrapped


def save_dataset(utterances, out_dir, config: FeatureConfig, stats: FeatureStats = None) -> None:
    """Persist utterances as per-utterance .npz feature files plus index.json."""
    if not utterances:
        raise DataError("refusing to save an empty dataset")
    out_dir = Path(out_dir)
    feats = out_dir / "feats"
    feats.mkdir(parents=True, exist_ok=True)
    if stats is None:
        stats = compute_stats(utterances)
    entries = []
    for utt in utterances:
        rel = f"feats/{utt.record.file_id}.npz"
        np.savez(
            out_dir / rel,
            durations=np.asarray(utt.durations_frames, dtype=np.int64),
            mel=utt.mel.values.astype(np.float32),
            pitch=utt.pitch.astype(np.float32),
            energy=utt.energy.astype(np.float32),
        )
        entries.append({"metadata": serialize_metadata(utt.record), "features": rel})
    index = {
        "version": MANIFEST_VERSION,
        "feature_config": config.to_dict(),
        "stats": stats.to_dict(),
        "utterances": entries,
    }
    (out_dir / "index.json").write_text(json.dumps(index, indent=2), encoding="utf-8")


def load_dataset(in_dir):
    """Inverse of save_dataset: (utterances, config, stats)."""
    in_dir = Path(in_dir)
    index = json.loads((in_dir / "index.json").read_text(encoding="utf-8"))
    if index.get("version") != MANIFEST_VERSION:
        raise DataError(f"unsupported manifest version {index.get('version')}")
    config = FeatureConfig.from_dict(index["feature_config"])
    stats = FeatureStats.from_dict(index["stats"])
    utterances = []
    for entry in index["utterances"]:
        record = parse_metadata_line(entry["metadata"])
        data = np.load(in_dir / entry["features"])
        mel = MelSpectrogram(
            data["mel"].astype(np.float64), config.sample_rate, config.hop_length
        )
        utterances.append(
            AlignedUtterance(
                record,
                tuple(int(d) for d in data["durations"]),
                mel,
                data["pitch"].astype(np.float64),
                data["energy"].astype(np.float64),
            )
        )
    return utterances, config, stats
