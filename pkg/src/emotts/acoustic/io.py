"""Acoustic checkpoint persistence: weights + config + speaker table +
feature config in the shared versioned binary format.
"""

from ..checkpoint import load_checkpoint, save_checkpoint, state_dict_to_arrays, load_state_into
from ..corpus.dataset import FeatureStats
from ..corpus.features import FeatureConfig
from .model import AcousticConfig, AcousticModel


def save_acoustic(path, model: AcousticModel, speakers: dict, feature_config: FeatureConfig) -> None:
    config = {
        "model": model.config.to_dict(),
        "stats": model.stats.to_dict(),
        "speakers": speakers,
        "feature_config": feature_config.to_dict(),
    }
    save_checkpoint(path, "acoustic", config, state_dict_to_arrays(model.state_dict()))


def load_acoustic(path):
    """Returns (model in eval mode, speakers, FeatureConfig)."""
    kind, config, tensors = load_checkpoint(path)
    if kind != "acoustic":
        raise ValueError(f"{path} is a {kind!r} checkpoint, expected acoustic")
    model = AcousticModel(
        AcousticConfig.from_dict(config["model"]),
        FeatureStats.from_dict(config["stats"]),
    )
    load_state_into(model, tensors)
    model.eval()
    return model, config["speakers"], FeatureConfig.from_dict(config["feature_config"])
