"""Non-autoregressive acoustic model (encoder, variance adaptor, mel decoder)
with speaker and emotion conditioning.
"""

from .io import load_acoustic, save_acoustic
from .model import (
    AcousticConfig,
    AcousticModel,
    DEFAULT_STATS,
    PostNet,
    VarianceOutputs,
    VariancePredictor,
    length_regulate,
    predicted_frames,
)
from .ops import decode_mel, embed_phonemes, encode, inject_condition, variance_adapt

__all__ = [
    "AcousticConfig",
    "AcousticModel",
    "DEFAULT_STATS",
    "PostNet",
    "VarianceOutputs",
    "VariancePredictor",
    "decode_mel",
    "embed_phonemes",
    "encode",
    "inject_condition",
    "length_regulate",
    "load_acoustic",
    "predicted_frames",
    "save_acoustic",
    "variance_adapt",
]
