"""Optimizer settings and the warmup/anneal learning-rate schedule."""

from dataclasses import dataclass


@dataclass(frozen=True)
class OptimizerConfig:
    batch_size: int = 16
    betas: tuple = (0.9, 0.98)
    eps: float = 1e-9
    weight_decay: float = 0.0
    grad_clip: float = 1.0
    accumulation: int = 1
    warmup: int = 4000
    anneal_steps: tuple = (300_000, 400_000, 500_000)
    anneal_rate: float = 0.3
    base_scale: float = 1.0

    def __post_init__(self):
        if self.warmup < 1:
            raise ValueError("warmup must be >= 1")
        steps = tuple(self.anneal_steps)
        if any(b >= a for a, b in zip(steps[1:], steps)):
            raise ValueError("anneal_steps must be strictly increasing")
        if self.accumulation < 1 or self.batch_size < 1:
            raise ValueError("batch_size and accumulation must be >= 1")


def lr_at(step: int, config: OptimizerConfig, d_model: int = 256) -> float:
    """Inverse-square-root warmup schedule with stepwise annealing.

    lr = base_scale * d_model^-0.5 * min(step^-0.5, step * warmup^-1.5)
         * anneal_rate^(number of anneal thresholds passed)
    """
    if step < 1:
        raise ValueError("schedule steps start at 1")
    scale = config.base_scale * d_model ** -0.5
    ramp = min(step ** -0.5, step * config.warmup ** -1.5)
    anneal = config.anneal_rate ** sum(1 for t in config.anneal_steps if t <= step)
    return scale * ramp * anneal
