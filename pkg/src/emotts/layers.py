"""Shared transformer building blocks: sinusoidal positions, masked
multi-head self-attention, and the FFT block (attention + gated-convolution
feed-forward) used by the acoustic encoder/decoder.
"""

import math

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F


def sinusoid_encoding_table(n_position: int, d_model: int) -> torch.Tensor:
    """Fixed sin/cos position table, shape [n_position, d_model]."""
    position = np.arange(n_position)[:, None]
    dim = np.arange(d_model)[None, :]
    angle = position / np.power(10000.0, 2 * (dim // 2) / d_model)
    table = np.zeros((n_position, d_model))
    table[:, 0::2] = np.sin(angle[:, 0::2])
    table[:, 1::2] = np.cos(angle[:, 1::2])
    return torch.tensor(table, dtype=torch.get_default_dtype())


def lengths_to_mask(lengths: torch.Tensor, max_len: int = None) -> torch.Tensor:
    """Boolean pad mask [B, T], True on padded positions."""
    if max_len is None:
        max_len = int(lengths.max().item()) if lengths.numel() else 0
    ids = torch.arange(max_len, device=lengths.device)
    return ids[None, :] >= lengths[:, None]


class MultiHeadSelfAttention(nn.Module):
    """Scaled dot-product self-attention over [B, T, d] with key masking."""

    def __init__(self, d_model: int, n_heads: int, dropout: float = 0.1):
        super().__init__()
        if d_model % n_heads:
            raise ValueError(f"d_model {d_model} not divisible by {n_heads} heads")
        self.n_heads = n_heads
        self.d_head = d_model // n_heads
        self.w_q = nn.Linear(d_model, d_model)
        self.w_k = nn.Linear(d_model, d_model)
        self.w_v = nn.Linear(d_model, d_model)
        self.w_o = nn.Linear(d_model, d_model)
        self.dropout = nn.Dropout(dropout)

    def forward(self, x, pad_mask=None, return_weights=False):
        batch, length, _ = x.shape

        def split(t):
            return t.view(batch, length, self.n_heads, self.d_head).transpose(1, 2)

        q, k, v = split(self.w_q(x)), split(self.w_k(x)), split(self.w_v(x))
        scores = q @ k.transpose(-2, -1) / math.sqrt(self.d_head)
        if pad_mask is not None:
            scores = scores.masked_fill(pad_mask[:, None, None, :], float("-inf"))
        weights = torch.softmax(scores, dim=-1)
        out = self.dropout(weights) @ v
        out = out.transpose(1, 2).reshape(batch, length, -1)
        out = self.w_o(out)
        if return_weights:
            return out, weights
        return out


class GatedConvFeedForward(nn.Module):
    """Position-wise feed-forward as two 1-D convolutions with gating.

    The wide (kernel 9) convolution produces gated channels (GLU); a
    kernel-1 convolution projects back to the model width.
    """

    def __init__(self, d_model: int, d_inner: int, kernels=(9, 1), dropout: float = 0.1):
        super().__init__()
        self.conv_wide = nn.Conv1d(
            d_model, 2 * d_inner, kernels[0], padding=(kernels[0] - 1) // 2
        )
        self.conv_point = nn.Conv1d(
            d_inner, d_model, kernels[1], padding=(kernels[1] - 1) // 2
        )
        self.dropout = nn.Dropout(dropout)

    def forward(self, x):
        y = x.transpose(1, 2)
        y = F.glu(self.conv_wide(y), dim=1)
        y = self.conv_point(y)
        return self.dropout(y.transpose(1, 2))


class FFTBlock(nn.Module):
    """Self-attention + gated-conv feed-forward, residual + post layer norm.

    Padded positions are zero-filled after each sublayer so convolution
    windows near sequence ends see the same zeros as unbatched inputs.
    """

    def __init__(self, d_model: int, n_heads: int, d_inner: int, dropout: float = 0.1):
        super().__init__()
        self.attention = MultiHeadSelfAttention(d_model, n_heads, dropout)
        self.attention_norm = nn.LayerNorm(d_model)
        self.feed_forward = GatedConvFeedForward(d_model, d_inner, dropout=dropout)
        self.feed_forward_norm = nn.LayerNorm(d_model)
        self.dropout = nn.Dropout(dropout)

    def forward(self, x, pad_mask=None, return_weights=False):
        attn_out = self.attention(x, pad_mask, return_weights)
        weights = None
        if return_weights:
            attn_out, weights = attn_out
        x = self.attention_norm(x + self.dropout(attn_out))
        if pad_mask is not None:
            x = x.masked_fill(pad_mask[:, :, None], 0.0)
        x = self.feed_forward_norm(x + self.feed_forward(x))
        if pad_mask is not None:
            x = x.masked_fill(pad_mask[:, :, None], 0.0)
        if return_weights:
            return x, weights
        return x
