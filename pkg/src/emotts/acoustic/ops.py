"""Single-sequence functional wrappers over AcousticModel, mirroring the
pipeline stages: embed -> encode -> condition -> variance-adapt -> decode.

These run the model in eval mode without gradients; training uses the
batched AcousticModel.forward directly.
"""

from contextlib import contextmanager

import torch

from .model import AcousticModel, VarianceOutputs


@contextmanager
def _inference(model: AcousticModel):
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            yield
    finally:
        model.train(was_training)


def embed_phonemes(ids, model: AcousticModel) -> torch.Tensor:
    """Embedding-plus-position rows for a phoneme id list, shape [n, d]."""
    with _inference(model):
        tensor = torch.as_tensor(list(ids), dtype=torch.long).reshape(1, -1)
        return model.embed(tensor)[0]


def encode(x: torch.Tensor, model: AcousticModel, return_attention: bool = False):
    """Run the encoder stack on [n, d]; shape preserved."""
    with _inference(model):
        if x.shape[0] == 0:
            return (x, []) if return_attention else x
        out = model.encode(x[None], return_attention=return_attention)
        if return_attention:
            hidden, attentions = out
            return hidden[0], [a[0] for a in attentions]
        return out[0]


def inject_condition(
    hidden: torch.Tensor, speaker_id: int, emotion_id: int, model: AcousticModel
) -> torch.Tensor:
    """Add the speaker and processed-emotion vectors to every time step."""
    with _inference(model):
        speaker = torch.tensor([speaker_id], dtype=torch.long)
        emotion = torch.tensor([emotion_id], dtype=torch.long)
        return model.condition(hidden[None], speaker, emotion)[0]


def variance_adapt(
    hidden: torch.Tensor,
    model: AcousticModel,
    duration_targets=None,
    pitch_targets=None,
    energy_targets=None,
):
    """Predict D/P/E and expand to frame rate: ([T, d], VarianceOutputs)."""

    def prep(t):
        return None if t is None else torch.as_tensor(t).to(hidden.dtype)[None]

    with _inference(model):
        expanded, var, _ = model.variance_adapt(
            hidden[None],
            duration_targets=prep(duration_targets),
            pitch_targets=prep(pitch_targets),
            energy_targets=prep(energy_targets),
        )
        return expanded[0], VarianceOutputs(
            var.log_durations[0], var.pitch[0], var.energy[0]
        )


def decode_mel(frames: torch.Tensor, model: AcousticModel):
    """Decode expanded frames to (mel_before, mel_after), both [T, n_mels]."""
    with _inference(model):
        mel_before, mel_after = model.decode(frames[None])
        return mel_before[0], mel_after[0]
