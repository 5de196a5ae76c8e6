"""Non-autoregressive acoustic model: phoneme embedding -> FFT-block encoder
-> speaker/emotion conditioning -> variance adaptor (duration/pitch/energy +
length regulation) -> FFT-block decoder -> mel projection -> postnet.
"""

from dataclasses import dataclass, asdict, field

import numpy as np
import torch
import torch.nn as nn

from ..corpus.dataset import FeatureStats
from ..errors import ShapeError
from ..layers import FFTBlock, lengths_to_mask, sinusoid_encoding_table
from ..textfront.phonemes import VOCAB_SIZE

# Untrained duration heads start at ~6 frames per phoneme so inference
# produces audible output before any training.
_DURATION_BIAS_INIT = float(np.log(7.0))

DEFAULT_STATS = FeatureStats(
    pitch_min=60.0, pitch_max=400.0, pitch_mean=200.0, pitch_std=65.0,
    energy_min=0.0, energy_max=100.0, energy_mean=30.0, energy_std=20.0,
)


@dataclass(frozen=True)
class AcousticConfig:
    n_speakers: int
    vocab_size: int = VOCAB_SIZE
    encoder_layers: int = 4
    encoder_heads: int = 2
    encoder_hidden: int = 256
    decoder_layers: int = 6
    decoder_heads: int = 2
    decoder_hidden: int = 256
    fft_inner: int = 1024
    fft_dropout: float = 0.1
    variance_filter: int = 256
    variance_kernel: int = 3
    variance_dropout: float = 0.5
    variance_bins: int = 256
    n_mels: int = 80
    n_emotion: int = 5
    multi_emotion: bool = True
    multi_speaker: bool = True
    postnet_layers: int = 5
    postnet_channels: int = 256
    postnet_kernel: int = 5
    max_seq_len: int = 2000

    def __post_init__(self):
        if self.encoder_hidden % self.encoder_heads:
            raise ValueError("encoder hidden size must divide head count")
        if self.decoder_hidden % self.decoder_heads:
            raise ValueError("decoder hidden size must divide head count")
        if self.decoder_hidden != self.encoder_hidden:
            raise ValueError("decoder hidden must match encoder hidden")
        if self.multi_emotion and self.n_emotion != 5:
            raise ValueError("multi-emotion models use exactly 5 emotions")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AcousticConfig":
        return cls(**d)


@dataclass(frozen=True)
class VarianceOutputs:
    """Per-phoneme log-duration, pitch and energy predictions."""

    log_durations: torch.Tensor
    pitch: torch.Tensor
    energy: torch.Tensor


class VariancePredictor(nn.Module):
    """Two conv1d+ReLU+LayerNorm+dropout layers and a scalar linear head."""

    def __init__(self, hidden, filter_size, kernel, dropout, bias_init=0.0):
        super().__init__()
        padding = (kernel - 1) // 2
        self.conv1 = nn.Conv1d(hidden, filter_size, kernel, padding=padding)
        self.norm1 = nn.LayerNorm(filter_size)
        self.conv2 = nn.Conv1d(filter_size, filter_size, kernel, padding=padding)
        self.norm2 = nn.LayerNorm(filter_size)
        self.dropout = nn.Dropout(dropout)
        self.out = nn.Linear(filter_size, 1)
        nn.init.constant_(self.out.bias, bias_init)

    def forward(self, x, pad_mask=None):
        y = torch.relu(self.conv1(x.transpose(1, 2))).transpose(1, 2)
        y = self.dropout(self.norm1(y))
        if pad_mask is not None:
            # Padded rows must stay zero or the next kernel window reads them.
            y = y.masked_fill(pad_mask[:, :, None], 0.0)
        y = torch.relu(self.conv2(y.transpose(1, 2))).transpose(1, 2)
        y = self.dropout(self.norm2(y))
        y = self.out(y).squeeze(-1)
        if pad_mask is not None:
            y = y.masked_fill(pad_mask, 0.0)
        return y


class PostNet(nn.Module):
    """Residual refinement: conv1d stack, tanh on all but the last layer."""

    def __init__(self, n_mels, channels, kernel, n_layers):
        super().__init__()
        padding = (kernel - 1) // 2
        sizes = [n_mels] + [channels] * (n_layers - 1) + [n_mels]
        self.convs = nn.ModuleList(
            nn.Conv1d(sizes[i], sizes[i + 1], kernel, padding=padding)
            for i in range(n_layers)
        )

    def forward(self, mel, pad_mask=None):
        y = mel.transpose(1, 2)
        for conv in self.convs[:-1]:
            y = torch.tanh(conv(y))
            if pad_mask is not None:
                y = y.masked_fill(pad_mask[:, None, :], 0.0)
        return self.convs[-1](y).transpose(1, 2)


def length_regulate(hidden: torch.Tensor, durations: torch.Tensor):
    """Repeat each phoneme's hidden row by its frame duration.

    hidden [B, n, d], durations [B, n] (non-negative ints) ->
    (frames [B, T, d] zero-padded, lengths [B]).
    """
    if durations.shape != hidden.shape[:2]:
        raise ShapeError(
            f"durations {tuple(durations.shape)} do not match hidden "
            f"{tuple(hidden.shape[:2])}"
        )
    if (durations < 0).any():
        raise ValueError("durations must be non-negative")
    expanded = [
        hidden[b].repeat_interleave(durations[b], dim=0)
        for b in range(hidden.shape[0])
    ]
    lengths = torch.tensor([e.shape[0] for e in expanded], dtype=torch.long)
    max_len = max(1, int(lengths.max().item()) if len(expanded) else 1)
    out = hidden.new_zeros(hidden.shape[0], max_len, hidden.shape[2])
    for b, e in enumerate(expanded):
        out[b, : e.shape[0]] = e
    return out, lengths


def predicted_frames(log_durations: torch.Tensor) -> torch.Tensor:
    """Invert log-domain duration predictions: frames = max(0, round(e^D - 1))."""
    return torch.clamp(torch.round(torch.exp(log_durations) - 1.0), min=0).long()


class AcousticModel(nn.Module):
    def __init__(self, config: AcousticConfig, stats: FeatureStats = None):
        super().__init__()
        self.config = config
        self.stats = stats or DEFAULT_STATS
        h = config.encoder_hidden

        self.phoneme_emb = nn.Embedding(config.vocab_size, h, padding_idx=0)
        self.register_buffer(
            "position_table",
            sinusoid_encoding_table(config.max_seq_len, h),
            persistent=False,
        )
        self.encoder_blocks = nn.ModuleList(
            FFTBlock(h, config.encoder_heads, config.fft_inner, config.fft_dropout)
            for _ in range(config.encoder_layers)
        )

        self.speaker_emb = nn.Embedding(config.n_speakers, h)
        self.emotion_emb = nn.Embedding(config.n_emotion, h)
        self.emotion_linear = nn.Linear(h, h)

        vp = (h, config.variance_filter, config.variance_kernel, config.variance_dropout)
        self.duration_predictor = VariancePredictor(*vp, bias_init=_DURATION_BIAS_INIT)
        self.pitch_predictor = VariancePredictor(*vp)
        self.energy_predictor = VariancePredictor(*vp)

        self.register_buffer("pitch_boundaries", self._boundaries("pitch"), persistent=False)
        self.register_buffer("energy_boundaries", self._boundaries("energy"), persistent=False)
        self.pitch_bucket_emb = nn.Embedding(config.variance_bins, h)
        self.energy_bucket_emb = nn.Embedding(config.variance_bins, h)

        self.decoder_blocks = nn.ModuleList(
            FFTBlock(h, config.decoder_heads, config.fft_inner, config.fft_dropout)
            for _ in range(config.decoder_layers)
        )
        self.mel_linear = nn.Linear(config.decoder_hidden, config.n_mels)
        self.postnet = PostNet(
            config.n_mels,
            config.postnet_channels,
            config.postnet_kernel,
            config.postnet_layers,
        )

    def _boundaries(self, which: str) -> torch.Tensor:
        s = self.stats
        if which == "pitch":
            lo = (s.pitch_min - s.pitch_mean) / s.pitch_std
            hi = (s.pitch_max - s.pitch_mean) / s.pitch_std
        else:
            lo = (s.energy_min - s.energy_mean) / s.energy_std
            hi = (s.energy_max - s.energy_mean) / s.energy_std
        if hi <= lo:
            hi = lo + 1.0
        return torch.linspace(lo, hi, self.config.variance_bins - 1)

    def set_stats(self, stats: FeatureStats) -> None:
        """Adopt corpus statistics for pitch/energy bucket boundaries."""
        self.stats = stats
        dtype = self.pitch_boundaries.dtype
        self.pitch_boundaries = self._boundaries("pitch").to(dtype)
        self.energy_boundaries = self._boundaries("energy").to(dtype)

    def normalize_pitch(self, pitch):
        return (pitch - self.stats.pitch_mean) / self.stats.pitch_std

    def normalize_energy(self, energy):
        return (energy - self.stats.energy_mean) / self.stats.energy_std

    def _positions(self, length: int) -> torch.Tensor:
        if length <= self.position_table.shape[0]:
            return self.position_table[:length]
        table = sinusoid_encoding_table(length, self.config.encoder_hidden)
        return table.to(self.position_table.device, self.position_table.dtype)

    def embed(self, phoneme_ids: torch.Tensor) -> torch.Tensor:
        """Phoneme embeddings plus sinusoidal positions, [B, n, d]."""
        n = phoneme_ids.shape[1]
        return self.phoneme_emb(phoneme_ids) + self._positions(n)[None, :, :]

    def encode(self, x: torch.Tensor, src_pad_mask=None, return_attention=False):
        """4 FFT blocks over the embedded sequence; shape-preserving."""
        attentions = []
        if x.shape[1] == 0:
            return (x, attentions) if return_attention else x
        if src_pad_mask is not None:
            x = x.masked_fill(src_pad_mask[:, :, None], 0.0)
        for block in self.encoder_blocks:
            x = block(x, src_pad_mask, return_weights=return_attention)
            if return_attention:
                x, weights = x
                attentions.append(weights)
        if return_attention:
            return x, attentions
        return x

    def condition(self, hidden, speaker_ids, emotion_ids, src_pad_mask=None):
        """Add speaker and ReLU(linear(emotion)) embeddings, broadcast in time."""
        addend = self.speaker_emb(speaker_ids)
        addend = addend + torch.relu(self.emotion_linear(self.emotion_emb(emotion_ids)))
        out = hidden + addend[:, None, :]
        if src_pad_mask is not None:
            out = out.masked_fill(src_pad_mask[:, :, None], 0.0)
        return out

    def variance_adapt(
        self,
        hidden: torch.Tensor,
        src_pad_mask=None,
        duration_targets=None,
        pitch_targets=None,
        energy_targets=None,
    ):
        """Predict D/P/E, add pitch/energy bucket embeddings, expand to frames.

        Targets (teacher forcing) must be per-phoneme; pitch/energy targets
        are expected in the normalized domain. Returns
        (frames [B, T, d], VarianceOutputs, mel_lengths [B]).
        """
        for name, target in (
            ("duration", duration_targets),
            ("pitch", pitch_targets),
            ("energy", energy_targets),
        ):
            if target is not None and target.shape != hidden.shape[:2]:
                raise ShapeError(
                    f"{name} targets {tuple(target.shape)} do not match phoneme "
                    f"sequence {tuple(hidden.shape[:2])}"
                )

        log_d = self.duration_predictor(hidden, src_pad_mask)
        pitch = self.pitch_predictor(hidden, src_pad_mask)
        energy = self.energy_predictor(hidden, src_pad_mask)
        outputs = VarianceOutputs(log_d, pitch, energy)

        pitch_source = pitch_targets if pitch_targets is not None else pitch.detach()
        energy_source = energy_targets if energy_targets is not None else energy.detach()
        pitch_ids = torch.bucketize(pitch_source, self.pitch_boundaries)
        energy_ids = torch.bucketize(energy_source, self.energy_boundaries)
        hidden = hidden + self.pitch_bucket_emb(pitch_ids) + self.energy_bucket_emb(energy_ids)
        if src_pad_mask is not None:
            hidden = hidden.masked_fill(src_pad_mask[:, :, None], 0.0)

        if duration_targets is not None:
            frames = duration_targets.long()
        else:
            frames = predicted_frames(log_d)
            if src_pad_mask is not None:
                frames = frames.masked_fill(src_pad_mask, 0)
        expanded, mel_lengths = length_regulate(hidden, frames)
        return expanded, outputs, mel_lengths

    def decode(self, frames: torch.Tensor, mel_pad_mask=None):
        """6 FFT blocks then mel projection and postnet residual."""
        if frames.shape[1] == 0:
            empty = frames.new_zeros(frames.shape[0], 0, self.config.n_mels)
            return empty, empty
        t = frames.shape[1]
        y = frames + self._positions(t)[None, :, :]
        if mel_pad_mask is not None:
            y = y.masked_fill(mel_pad_mask[:, :, None], 0.0)
        for block in self.decoder_blocks:
            y = block(y, mel_pad_mask)
        mel_before = self.mel_linear(y)
        if mel_pad_mask is not None:
            mel_before = mel_before.masked_fill(mel_pad_mask[:, :, None], 0.0)
        mel_after = mel_before + self.postnet(mel_before, mel_pad_mask)
        if mel_pad_mask is not None:
            mel_after = mel_after.masked_fill(mel_pad_mask[:, :, None], 0.0)
        return mel_before, mel_after

    def forward(
        self,
        phoneme_ids: torch.Tensor,
        src_lengths: torch.Tensor,
        speaker_ids: torch.Tensor,
        emotion_ids: torch.Tensor,
        duration_targets=None,
        pitch_targets=None,
        energy_targets=None,
    ) -> dict:
        src_pad_mask = lengths_to_mask(src_lengths, phoneme_ids.shape[1])
        x = self.embed(phoneme_ids)
        hidden = self.encode(x, src_pad_mask)
        hidden = self.condition(hidden, speaker_ids, emotion_ids, src_pad_mask)
        expanded, variance, mel_lengths = self.variance_adapt(
            hidden, src_pad_mask, duration_targets, pitch_targets, energy_targets
        )
        mel_pad_mask = lengths_to_mask(mel_lengths.to(expanded.device), expanded.shape[1])
        mel_before, mel_after = self.decode(expanded, mel_pad_mask)
        return {
            "mel_before": mel_before,
            "mel_after": mel_after,
            "log_durations": variance.log_durations,
            "pitch": variance.pitch,
            "energy": variance.energy,
            "mel_lengths": mel_lengths,
            "src_pad_mask": src_pad_mask,
            "mel_pad_mask": mel_pad_mask,
        }
