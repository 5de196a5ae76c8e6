"""Acoustic model walkthrough, stage by stage: phoneme embedding -> FFT-block
encoder -> speaker/emotion conditioning -> variance adaptor -> mel decoder."""

import torch

from emotts.acoustic import (
    AcousticConfig,
    AcousticModel,
    decode_mel,
    embed_phonemes,
    encode,
    inject_condition,
    variance_adapt,
)
from emotts.textfront import PronunciationLexicon, g2p, normalize_text

torch.manual_seed(0)
config = AcousticConfig(
    n_speakers=4,
    encoder_layers=2, decoder_layers=2,
    encoder_hidden=64, decoder_hidden=64,
    fft_inner=128, variance_filter=64, postnet_channels=64,
)
model = AcousticModel(config).eval()
n_params = sum(p.numel() for p in model.parameters())
print(f"model: {config.encoder_layers}-layer encoder / {config.decoder_layers}-layer "
      f"decoder, hidden {config.encoder_hidden}, {n_params:,} parameters")

lexicon = PronunciationLexicon.load()
sequence = g2p(normalize_text("Keep an eye on him."), lexicon)
ids = sequence.ids()
print(f"\nphonemes ({len(ids)}): {' '.join(sequence.phonemes)}")

x = embed_phonemes(ids, model)
print(f"embedded:      {tuple(x.shape)}  (embedding + sinusoidal positions)")

hidden = encode(x, model)
print(f"encoded:       {tuple(hidden.shape)}  (shape preserved)")

conditioned = inject_condition(hidden, speaker_id=0, emotion_id=3, model=model)
delta = (conditioned - hidden)[0]
print(f"conditioned:   speaker 0 + emotion 3 add a time-constant vector "
      f"(|delta| = {float(delta.norm()):.3f})")

frames, variance = variance_adapt(conditioned, model)
predicted = torch.clamp(torch.round(torch.exp(variance.log_durations) - 1), min=0)
print(f"durations:     {[int(d) for d in predicted]} frames per phoneme")
print(f"expanded:      {tuple(frames.shape)}  (length regulator output)")

mel_before, mel_after = decode_mel(frames, model)
print(f"mel decoder:   before {tuple(mel_before.shape)}, after postnet "
      f"{tuple(mel_after.shape)}")

with torch.no_grad():
    out0 = model(torch.tensor([ids]), torch.tensor([len(ids)]),
                 torch.tensor([0]), torch.tensor([0]))
    out3 = model(torch.tensor([ids]), torch.tensor([len(ids)]),
                 torch.tensor([0]), torch.tensor([3]))
print(f"\nemotion 0 vs 3 -> mel frame counts {int(out0['mel_lengths'][0])} vs "
      f"{int(out3['mel_lengths'][0])} (conditioning also shifts predicted tempo)")
