"""Vocoder walkthrough: mel -> Griffin-Lim waveform, the GAN-style generator's
length law, and a spectrogram plot of the reconstruction."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import torch

from emotts.corpus import FeatureConfig, MelSpectrogram, extract_mel
from emotts.vocoder import (
    GeneratorConfig,
    MelGenerator,
    griffin_lim,
    hifigan_generate,
    mel_to_linear,
    spectral_convergence,
    write_wav,
)

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
config = FeatureConfig()

print("== Griffin-Lim on a synthetic tone ==")
t = np.arange(22050) / 22050
tone = 0.5 * np.sin(2 * np.pi * 440 * t) * np.hanning(22050)
mel = extract_mel(tone, config)
print(f"mel: {mel.num_frames} frames x {mel.n_mels} bands")

target = mel_to_linear(mel, config)
for iterations in (0, 8, 32):
    waveform = griffin_lim(mel, config, iterations=iterations)
    err = spectral_convergence(waveform, target, config)
    print(f"  {iterations:2d} iterations: spectral residual {err:.4f}")

waveform = griffin_lim(mel, config, iterations=32)
write_wav(waveform, out / "tone_reconstructed.wav")
print(f"wrote {out / 'tone_reconstructed.wav'} ({waveform.duration:.2f}s)")

print("\n== GAN-style generator length law ==")
torch.manual_seed(0)
generator = MelGenerator(GeneratorConfig(n_mels=80, initial_channels=64)).eval()
gcfg = generator.config
print(f"upsample factors {gcfg.upsample_factors} (product {gcfg.total_upsampling} "
      f"= hop length)")
for frames in (1, 7, 91):
    synth = hifigan_generate(
        MelSpectrogram(mel.values[:frames], 22050, 256), generator
    )
    print(f"  {frames:3d} frames -> {len(synth):6d} samples")

fig, axes = plt.subplots(2, 1, figsize=(8, 5), sharex=False)
axes[0].plot(waveform.samples[:4000])
axes[0].set(title="Griffin-Lim reconstruction (first 4000 samples)")
axes[1].imshow(mel.values.T, origin="lower", aspect="auto", cmap="magma")
axes[1].set(title="log-mel spectrogram", xlabel="frame", ylabel="mel band")
fig.tight_layout()
fig.savefig(out / "vocoder.png", dpi=110)
print(f"\nplot: {out / 'vocoder.png'}")
