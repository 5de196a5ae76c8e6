"""Training walkthrough: losses, the warmup/anneal schedule, and a short
overfitting run on a 2-utterance toy corpus (with a loss-curve plot)."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import torch

from emotts.acoustic import AcousticConfig, AcousticModel
from emotts.corpus import FeatureConfig, build_dataset, generate_toy_corpus
from emotts.training import OptimizerConfig, lr_at, train_acoustic

out = Path(__file__).parent / "out" / "training"
out.mkdir(parents=True, exist_ok=True)

print("== learning-rate schedule ==")
config = OptimizerConfig()
for step in (1, 1000, 4000, 10_000, 350_000, 450_000):
    print(f"  step {step:>7,}: lr = {lr_at(step, config):.3e}")

print("\n== toy overfit run ==")
audio_dir, textgrid_dir, metadata = generate_toy_corpus(out / "corpus", n_utterances=2, seed=3)
utterances = build_dataset(audio_dir, textgrid_dir, metadata, FeatureConfig())
print(f"dataset: {len(utterances)} utterances, "
      f"{[u.num_frames for u in utterances]} frames")

torch.manual_seed(0)
model = AcousticModel(
    AcousticConfig(
        n_speakers=2, encoder_layers=2, decoder_layers=2,
        encoder_hidden=64, decoder_hidden=64, fft_inner=128,
        variance_filter=64, variance_bins=64, postnet_channels=64,
    )
)
result = train_acoustic(
    utterances, model,
    OptimizerConfig(batch_size=2, warmup=100, base_scale=1.0),
    steps=300, seed=0, out_dir=out / "run",
)

totals = [h["total"] for h in result.history]
print(f"total loss: {totals[0]:.3f} -> {totals[-1]:.3f} "
      f"({100 * (1 - totals[-1] / totals[0]):.0f}% reduction in {len(totals)} steps)")
print(f"checkpoint: {result.checkpoint_path}")
print(f"step log:   {out / 'run' / 'train_log.jsonl'}")

fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
axes[0].plot(totals)
axes[0].set(title="total loss", xlabel="step")
for key in ("mel", "postnet_mel", "pitch", "energy", "duration"):
    axes[1].plot([h[key] for h in result.history], label=key)
axes[1].legend(fontsize=8)
axes[1].set(title="components", xlabel="step")
fig.tight_layout()
fig.savefig(out / "loss_curves.png", dpi=110)
print(f"plot:       {out / 'loss_curves.png'}")
