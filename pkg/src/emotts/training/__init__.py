"""Loss computation, learning-rate schedule, and the acoustic training loop."""

from .losses import LossBreakdown, l1_loss, log_duration_targets, mse_loss, total_loss
from .loop import TrainingResult, collate, prepare_example, train_acoustic
from .schedule import OptimizerConfig, lr_at

__all__ = [
    "LossBreakdown",
    "OptimizerConfig",
    "TrainingResult",
    "collate",
    "l1_loss",
    "log_duration_targets",
    "lr_at",
    "mse_loss",
    "prepare_example",
    "total_loss",
    "train_acoustic",
]
