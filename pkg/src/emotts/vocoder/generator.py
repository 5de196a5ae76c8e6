"""Feed-forward GAN-style mel-to-waveform generator (inference only).

Input conv -> per-stage transposed-conv upsampling + residual blocks (each
unit a dilated conv followed by a unit-dilation conv) -> output conv + tanh.
Output length is exactly frames * product(upsample_factors).
"""

import math
from dataclasses import dataclass, asdict

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from ..checkpoint import load_checkpoint, save_checkpoint, state_dict_to_arrays, load_state_into
from ..corpus.features import MelSpectrogram
from ..errors import WeightMismatch
from .wavio import Waveform

LEAKY_SLOPE = 0.1


@dataclass(frozen=True)
class GeneratorConfig:
    n_mels: int = 80
    upsample_factors: tuple = (8, 8, 2, 2)
    initial_channels: int = 512
    resblock_kernels: tuple = (3, 7, 11)
    resblock_dilations: tuple = (1, 3, 5)

    def __post_init__(self):
        if any(f < 1 for f in self.upsample_factors):
            raise ValueError("upsample factors must be positive")

    @property
    def total_upsampling(self) -> int:
        return math.prod(self.upsample_factors)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorConfig":
        d = dict(d)
        for key in ("upsample_factors", "resblock_kernels", "resblock_dilations"):
            d[key] = tuple(d[key])
        return cls(**d)


class ResBlock(nn.Module):
    """Residual units of two convs: one dilated, one unit-dilation."""

    def __init__(self, channels: int, kernel: int, dilations: tuple):
        super().__init__()
        self.convs_dilated = nn.ModuleList(
            nn.Conv1d(channels, channels, kernel, dilation=d, padding=d * (kernel - 1) // 2)
            for d in dilations
        )
        self.convs_unit = nn.ModuleList(
            nn.Conv1d(channels, channels, kernel, padding=(kernel - 1) // 2)
            for _ in dilations
        )

    def forward(self, x):
        for dilated, unit in zip(self.convs_dilated, self.convs_unit):
            y = dilated(F.leaky_relu(x, LEAKY_SLOPE))
            y = unit(F.leaky_relu(y, LEAKY_SLOPE))
            x = x + y
        return x


def _upsample_kernel(factor: int) -> int:
    return 2 * factor if factor % 2 == 0 else factor


class MelGenerator(nn.Module):
    def __init__(self, config: GeneratorConfig):
        super().__init__()
        self.config = config
        channels = config.initial_channels
        self.conv_pre = nn.Conv1d(config.n_mels, channels, 7, padding=3)
        self.ups = nn.ModuleList()
        self.resblocks = nn.ModuleList()
        for factor in config.upsample_factors:
            kernel = _upsample_kernel(factor)
            self.ups.append(
                nn.ConvTranspose1d(
                    channels, channels // 2, kernel, stride=factor,
                    padding=(kernel - factor) // 2,
                )
            )
            channels //= 2
            for k in config.resblock_kernels:
                self.resblocks.append(ResBlock(channels, k, config.resblock_dilations))
        self.conv_post = nn.Conv1d(channels, 1, 7, padding=3)

    def forward(self, mel: torch.Tensor) -> torch.Tensor:
        """mel [B, frames, n_mels] -> samples [B, frames * total_upsampling]."""
        n_kernels = len(self.config.resblock_kernels)
        x = self.conv_pre(mel.transpose(1, 2))
        for i, up in enumerate(self.ups):
            x = up(F.leaky_relu(x, LEAKY_SLOPE))
            stack = self.resblocks[i * n_kernels : (i + 1) * n_kernels]
            x = sum(block(x) for block in stack) / n_kernels
        x = self.conv_post(F.leaky_relu(x, LEAKY_SLOPE))
        return torch.tanh(x).squeeze(1)


def hifigan_generate(mel: MelSpectrogram, weights, config: GeneratorConfig = None) -> Waveform:
    """Run the generator over a mel spectrogram.

    ``weights`` is either a ready MelGenerator or a {name: ndarray} dict
    (checked against the config; WeightMismatch names the first offending
    layer). The upsampling product must equal the mel hop length.
    """
    if isinstance(weights, MelGenerator):
        generator = weights
        config = generator.config
    else:
        if config is None:
            config = GeneratorConfig(n_mels=mel.n_mels)
        generator = MelGenerator(config)
        load_state_into(generator, dict(weights))
    if config.total_upsampling != mel.hop_length:
        raise WeightMismatch(
            "upsample_factors", f"product == hop {mel.hop_length}", config.total_upsampling
        )
    generator.eval()
    with torch.no_grad():
        param = next(generator.parameters())
        mel_tensor = torch.tensor(mel.values, dtype=param.dtype)[None]
        samples = generator(mel_tensor)[0].cpu().numpy().astype(np.float64)
    return Waveform(np.clip(samples, -1.0, 1.0), mel.sample_rate)


def save_generator(path, generator: MelGenerator) -> None:
    save_checkpoint(
        path, "vocoder", {"model": generator.config.to_dict()},
        state_dict_to_arrays(generator.state_dict()),
    )


def load_generator(path) -> MelGenerator:
    kind, config, tensors = load_checkpoint(path)
    if kind != "vocoder":
        raise ValueError(f"{path} is a {kind!r} checkpoint, expected vocoder")
    generator = MelGenerator(GeneratorConfig.from_dict(config["model"]))
    load_state_into(generator, tensors)
    generator.eval()
    return generator


def import_official_state(state: dict, config: GeneratorConfig) -> dict:
    """Map a published HiFi-GAN generator state dict onto MelGenerator names.

    Field mapping (weight-normalized tensors are fused as
    w = g * v / ||v||, norm over all but the output-channel dim):

    =======================================  =================================
    published                                 MelGenerator
    =======================================  =================================
    conv_pre.{weight_v,weight_g,bias}         conv_pre.{weight,bias}
    ups.<i>.{weight_v,weight_g,bias}          ups.<i>.{weight,bias}
    resblocks.<j>.convs1.<k>.*                resblocks.<j>.convs_dilated.<k>.*
    resblocks.<j>.convs2.<k>.*                resblocks.<j>.convs_unit.<k>.*
    conv_post.{weight_v,weight_g,bias}        conv_post.{weight,bias}
    =======================================  =================================
    """
    out = {}
    names = set()
    for key in state:
        if key.endswith((".weight_v", ".weight_g")):
            names.add(key.rsplit(".", 1)[0])
        elif key.endswith(".bias"):
            out[_map_official_name(key)] = np.asarray(state[key])
        elif key.endswith(".weight"):
            out[_map_official_name(key)] = np.asarray(state[key])
    for name in names:
        v = np.asarray(state[f"{name}.weight_v"], dtype=np.float64)
        g = np.asarray(state[f"{name}.weight_g"], dtype=np.float64)
        axes = tuple(range(1, v.ndim))
        norm = np.sqrt((v ** 2).sum(axis=axes, keepdims=True))
        fused = (g * v / np.maximum(norm, 1e-12)).astype(np.float32)
        out[_map_official_name(f"{name}.weight")] = fused
    return out


def _map_official_name(key: str) -> str:
    return key.replace(".convs1.", ".convs_dilated.").replace(
        ".convs2.", ".convs_unit."
    )
