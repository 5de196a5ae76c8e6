"""Acoustic model training loop: Adam + warmup/anneal schedule + global-norm
gradient clipping, teacher-forced durations/pitch/energy, JSONL step log,
atomic periodic checkpoints.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..acoustic.io import save_acoustic
from ..acoustic.model import AcousticModel
from ..corpus.dataset import compute_stats
from ..corpus.features import FeatureConfig, phoneme_average
from ..errors import DataError, NonFiniteLoss
from ..speakers import speaker_table
from .losses import total_loss
from .schedule import OptimizerConfig, lr_at


@dataclass
class TrainingResult:
    history: list = field(default_factory=list)
    checkpoint_path: Path = None
    speakers: dict = None


def prepare_example(utterance, model: AcousticModel, speakers: dict) -> dict:
    """Tensors for one utterance: ids, durations, normalized P/E, mel."""
    from ..textfront.phonemes import phonemes_to_ids

    durations = np.asarray(utterance.durations_frames, dtype=np.int64)
    pitch_ph = phoneme_average(utterance.pitch, durations, voiced_only=True)
    energy_ph = phoneme_average(utterance.energy, durations)
    # Unvoiced phonemes keep a neutral 0 target in the normalized domain.
    pitch_norm = np.where(pitch_ph > 0, model.normalize_pitch(pitch_ph), 0.0)
    energy_norm = model.normalize_energy(energy_ph)
    dtype = torch.get_default_dtype()
    return {
        "phonemes": torch.tensor(
            phonemes_to_ids(utterance.record.phonemes), dtype=torch.long
        ),
        "durations": torch.tensor(durations, dtype=torch.long),
        "pitch": torch.tensor(pitch_norm, dtype=dtype),
        "energy": torch.tensor(energy_norm, dtype=dtype),
        "mel": torch.tensor(utterance.mel.values, dtype=dtype),
        "speaker": speakers[utterance.record.speaker_id],
        "emotion": utterance.record.emotion,
    }


def collate(examples: list) -> tuple:
    """Pad a list of prepared examples into batched model inputs/targets."""
    from ..emotions import EMOTION_TO_ID

    n = max(e["phonemes"].shape[0] for e in examples)
    t = max(e["mel"].shape[0] for e in examples)
    dtype = torch.get_default_dtype()
    b = len(examples)
    n_mels = examples[0]["mel"].shape[1]

    phonemes = torch.zeros(b, n, dtype=torch.long)
    durations = torch.zeros(b, n, dtype=torch.long)
    pitch = torch.zeros(b, n, dtype=dtype)
    energy = torch.zeros(b, n, dtype=dtype)
    mel = torch.zeros(b, t, n_mels, dtype=dtype)
    src_lengths = torch.zeros(b, dtype=torch.long)
    speaker_ids = torch.zeros(b, dtype=torch.long)
    emotion_ids = torch.zeros(b, dtype=torch.long)
    for i, e in enumerate(examples):
        ln = e["phonemes"].shape[0]
        lt = e["mel"].shape[0]
        phonemes[i, :ln] = e["phonemes"]
        durations[i, :ln] = e["durations"]
        pitch[i, :ln] = e["pitch"]
        energy[i, :ln] = e["energy"]
        mel[i, :lt] = e["mel"]
        src_lengths[i] = ln
        speaker_ids[i] = e["speaker"]
        emotion_ids[i] = EMOTION_TO_ID[e["emotion"]]
    inputs = {
        "phoneme_ids": phonemes,
        "src_lengths": src_lengths,
        "speaker_ids": speaker_ids,
        "emotion_ids": emotion_ids,
        "duration_targets": durations,
        "pitch_targets": pitch,
        "energy_targets": energy,
    }
    targets = {
        "mel": mel,
        "duration_frames": durations,
        "pitch": pitch,
        "energy": energy,
    }
    return inputs, targets


def train_acoustic(
    dataset,
    model: AcousticModel,
    config: OptimizerConfig = OptimizerConfig(),
    steps: int = 500,
    seed: int = 0,
    out_dir=None,
    feature_config: FeatureConfig = None,
    speakers: dict = None,
    checkpoint_every: int = None,
    update_stats: bool = True,
) -> TrainingResult:
    """Train on AlignedUtterances for a fixed number of optimizer steps.

    Deterministic under the seed. Writes train_log.jsonl (one JSON object
    per step) and acoustic.ckpt under out_dir when given. Raises
    NonFiniteLoss (after dumping diagnostics) if the loss leaves the reals.
    """
    dataset = list(dataset)
    if not dataset:
        raise DataError("empty training dataset")
    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)

    if update_stats:
        model.set_stats(compute_stats(dataset))
    if speakers is None:
        speakers = speaker_table(u.record.speaker_id for u in dataset)
    if feature_config is None:
        feature_config = FeatureConfig()

    examples = [prepare_example(u, model, speakers) for u in dataset]
    optimizer = torch.optim.Adam(
        model.parameters(),
        lr=lr_at(1, config, model.config.encoder_hidden),
        betas=tuple(config.betas),
        eps=config.eps,
        weight_decay=config.weight_decay,
    )

    out_dir = Path(out_dir) if out_dir is not None else None
    log_file = None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        log_file = (out_dir / "train_log.jsonl").open("w", encoding="utf-8")

    def batches():
        while True:
            order = rng.permutation(len(examples))
            for start in range(0, len(order), config.batch_size):
                chunk = order[start : start + config.batch_size]
                yield [examples[i] for i in chunk]

    model.train()
    history = []
    checkpoint_path = out_dir / "acoustic.ckpt" if out_dir is not None else None
    batch_iter = batches()
    try:
        for step in range(1, steps + 1):
            lr = lr_at(step, config, model.config.encoder_hidden)
            for group in optimizer.param_groups:
                group["lr"] = lr
            optimizer.zero_grad()
            logged = None
            for _ in range(config.accumulation):
                inputs, targets = collate(next(batch_iter))
                outputs = model(**inputs)
                breakdown = total_loss(outputs, targets)
                (breakdown.total / config.accumulation).backward()
                logged = breakdown.to_floats()
            if not np.isfinite(logged["total"]):
                _dump_nonfinite(out_dir, step, lr, logged)
                raise NonFiniteLoss(f"non-finite loss at step {step}: {logged}")
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()

            entry = {"step": step, "lr": lr, **logged}
            history.append(entry)
            if log_file is not None:
                log_file.write(json.dumps(entry) + "\n")
            if (
                checkpoint_path is not None
                and checkpoint_every
                and step % checkpoint_every == 0
            ):
                save_acoustic(checkpoint_path, model, speakers, feature_config)
        if checkpoint_path is not None:
            save_acoustic(checkpoint_path, model, speakers, feature_config)
    finally:
        if log_file is not None:
            log_file.close()
    model.eval()
    return TrainingResult(history, checkpoint_path, speakers)


def _dump_nonfinite(out_dir, step, lr, losses) -> None:
    if out_dir is None:
        return
    dump = {"step": step, "lr": lr, "losses": losses}
    (Path(out_dir) / "nonfinite_dump.json").write_text(
        json.dumps(dump, indent=2), encoding="utf-8"
    )
