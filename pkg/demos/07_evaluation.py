"""Evaluation walkthrough: end-to-end synthesis timing (RTF), padded-waveform
RMSE, and the report tables."""

from pathlib import Path

import numpy as np
import torch

from emotts.acoustic import AcousticConfig, AcousticModel
from emotts.corpus import FeatureConfig
from emotts.evalkit import emit_report, rmse_waveforms, time_synthesis
from emotts.synthesizer import SynthesisRequest, Synthesizer
from emotts.vocoder import Waveform

out = Path(__file__).parent / "out" / "evaluation"
out.mkdir(parents=True, exist_ok=True)

torch.manual_seed(0)
model = AcousticModel(
    AcousticConfig(
        n_speakers=4, encoder_layers=2, decoder_layers=2,
        encoder_hidden=64, decoder_hidden=64, fft_inner=128,
        variance_filter=64, postnet_channels=64,
    )
)
speakers = {"bea": 0, "jenie": 1, "josh": 2, "sam": 3}
synthesizer = Synthesizer(model, speakers, FeatureConfig())

print("== timing (median over repeats, one untimed warmup) ==")
timing_results = []
for speaker in ("bea", "sam"):
    for emotion_id, emotion in ((0, "amused"), (3, "neutral")):
        request = SynthesisRequest(
            "Keep an eye on him.", speaker, emotion=emotion_id
        )
        result = time_synthesis(synthesizer, request, repeats=3, sample_id="0001")
        timing_results.append(result)
        print(f"  {speaker:6} {emotion:8} {result.wall_seconds:.3f}s wall, "
              f"{result.audio_seconds:.2f}s audio, RTF {result.rtf:.3f}")

print("\n== padded-waveform RMSE ==")
natural, _ = synthesizer.synthesize(
    SynthesisRequest("Keep an eye on him.", "bea", emotion=3)
)
synthesized, _ = synthesizer.synthesize(
    SynthesisRequest("Keep an eye on him.", "bea", emotion=0)
)
result = rmse_waveforms(natural, synthesized, speaker="bea", emotion="amused",
                        sample_id="0001")
print(f"  different emotions:   rmse {result.rmse:.4f} (padded: {result.padded})")
same = rmse_waveforms(natural, natural, speaker="bea", emotion="neutral")
print(f"  identical waveforms:  rmse {same.rmse:.4f}")
short = Waveform(natural.samples[:1000], natural.sample_rate)
padded = rmse_waveforms(short, Waveform(np.pad(short.samples, (0, 500)), 22050))
print(f"  trailing-zero pad:    rmse {padded.rmse:.4f} (padded: {padded.padded})")

paths = emit_report(
    timing_results=timing_results, rmse_results=[result, same],
    out_dir=out, rtf_reference=True,
)
print(f"\nreport files: {sorted(p.name for p in out.iterdir())}")
print("\n" + (out / "timing.txt").read_text())
