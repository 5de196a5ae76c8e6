"""Loss functions: masked L1 for mel terms, masked MSE for pitch/energy and
log-domain durations; the total is the plain sum of the five components.
"""

from dataclasses import dataclass

import torch

from ..errors import ShapeError


def _as_tensor(x) -> torch.Tensor:
    if isinstance(x, torch.Tensor):
        return x
    return torch.as_tensor(x, dtype=torch.get_default_dtype())


def _masked_mean(errors: torch.Tensor, pad_mask) -> torch.Tensor:
    if pad_mask is None:
        return errors.mean()
    keep = ~pad_mask
    while keep.dim() < errors.dim():
        keep = keep.unsqueeze(-1)
    keep = keep.expand_as(errors)
    count = keep.sum()
    if count == 0:
        return errors.sum() * 0.0
    return (errors * keep).sum() / count


def _check_shapes(pred: torch.Tensor, truth: torch.Tensor) -> None:
    if pred.shape != truth.shape:
        raise ShapeError(
            f"prediction shape {tuple(pred.shape)} != target shape {tuple(truth.shape)}"
        )


def l1_loss(pred, truth, pad_mask=None) -> torch.Tensor:
    """Mean absolute error over unmasked elements, accumulated in float64."""
    pred, truth = _as_tensor(pred), _as_tensor(truth)
    _check_shapes(pred, truth)
    return _masked_mean((pred.double() - truth.double()).abs(), pad_mask)


def mse_loss(pred, truth, pad_mask=None) -> torch.Tensor:
    """Mean squared error over unmasked elements, accumulated in float64."""
    pred, truth = _as_tensor(pred), _as_tensor(truth)
    _check_shapes(pred, truth)
    return _masked_mean((pred.double() - truth.double()) ** 2, pad_mask)


@dataclass(frozen=True)
class LossBreakdown:
    mel: torch.Tensor
    postnet_mel: torch.Tensor
    pitch: torch.Tensor
    energy: torch.Tensor
    duration: torch.Tensor
    total: torch.Tensor

    def to_floats(self) -> dict:
        return {
            "mel": float(self.mel.detach()),
            "postnet_mel": float(self.postnet_mel.detach()),
            "pitch": float(self.pitch.detach()),
            "energy": float(self.energy.detach()),
            "duration": float(self.duration.detach()),
            "total": float(self.total.detach()),
        }


def log_duration_targets(duration_frames: torch.Tensor) -> torch.Tensor:
    """Duration regression happens in the log domain: log(1 + frames)."""
    return torch.log1p(duration_frames.double())


def total_loss(outputs: dict, targets: dict) -> LossBreakdown:
    """Combine the five loss components from model outputs and targets.

    outputs: AcousticModel.forward dict. targets: {"mel" [B,T,M],
    "duration_frames" [B,n], "pitch" [B,n], "energy" [B,n]} with pitch and
    energy already normalized. Padded frames/phonemes are excluded from
    every mean.
    """
    mel_mask = outputs.get("mel_pad_mask")
    src_mask = outputs.get("src_pad_mask")
    mel = l1_loss(outputs["mel_before"], targets["mel"], mel_mask)
    postnet_mel = l1_loss(outputs["mel_after"], targets["mel"], mel_mask)
    pitch = mse_loss(outputs["pitch"], targets["pitch"], src_mask)
    energy = mse_loss(outputs["energy"], targets["energy"], src_mask)
    duration = mse_loss(
        outputs["log_durations"],
        log_duration_targets(_as_tensor(targets["duration_frames"])),
        src_mask,
    )
    total = mel + postnet_mel + pitch + energy + duration
    return LossBreakdown(mel, postnet_mel, pitch, energy, duration, total)
