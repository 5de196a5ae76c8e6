"""Corpus ingestion walkthrough: TextGrid intervals -> frame durations,
metadata records, feature extraction, and the on-disk manifest."""

from pathlib import Path

from emotts.corpus import (
    FeatureConfig,
    build_dataset,
    compute_stats,
    generate_toy_corpus,
    intervals_to_frame_durations,
    load_dataset,
    parse_metadata_line,
    parse_textgrid,
    phones_tier,
    save_dataset,
)

out = Path(__file__).parent / "out" / "corpus"
out.mkdir(parents=True, exist_ok=True)

print("== generating a toy corpus (synthetic MFA-shaped artifacts) ==")
audio_dir, textgrid_dir, metadata = generate_toy_corpus(out, n_utterances=4, seed=1)
print(f"wavs:      {sorted(p.name for p in audio_dir.glob('*.wav'))}")
print(f"textgrids: {sorted(p.name for p in textgrid_dir.glob('*.TextGrid'))}")

print("\n== metadata records (pipe-delimited) ==")
first_line = metadata.read_text().splitlines()[0]
print(first_line)
record = parse_metadata_line(first_line)
print(f"-> id={record.file_id} speaker={record.speaker_id} emotion={record.emotion}")

print("\n== TextGrid intervals -> frame durations ==")
tg = sorted(textgrid_dir.glob("*.TextGrid"))[0]
tier = phones_tier(parse_textgrid(tg.read_text()))
for iv in tier.intervals[:5]:
    print(f"  {iv.label or '(sil)':6} {iv.xmin:7.3f} .. {iv.xmax:7.3f} s")
durations = intervals_to_frame_durations(tier, 22050, 256)
print(f"frame durations: {durations[:10]}...  sum={sum(durations)}")

print("\n== full ingestion ==")
config = FeatureConfig()
utterances = build_dataset(audio_dir, textgrid_dir, metadata, config)
for utt in utterances:
    print(
        f"  {utt.record.file_id:18} {utt.num_frames:4d} frames, "
        f"{len(utt.record.phonemes):3d} phonemes, emotion {utt.record.emotion}"
    )
    assert sum(utt.durations_frames) == utt.mel.num_frames

stats = compute_stats(utterances)
print(f"\npitch over voiced frames: {stats.pitch_min:.0f}..{stats.pitch_max:.0f} Hz "
      f"(mean {stats.pitch_mean:.0f})")

manifest = out / "manifest"
save_dataset(utterances, manifest, config, stats)
reloaded, _, _ = load_dataset(manifest)
print(f"manifest round-trip: {len(reloaded)} utterances from {manifest}")
