"""Benchmark report emission: RFC-4180 CSV, aligned text tables, and a JSON
run log carrying hardware metadata.

Published reference measurements are bundled so report formatting can be
exercised without trained full-scale models; they are reference rows, not
reproduction targets.
"""

import csv
import json
import os
import platform
import sys
from pathlib import Path

from ..speakers import speaker_gender

TIMING_COLUMNS = ("Method", "Speaker", "Gender", "Emotion", "Sample ID", "Time (s)", "Words")
RMSE_COLUMNS = ("Speaker", "Gender", "Emotion", "Sample", "RMSE")
RTF_COLUMNS = ("System", "Vocoder", "RTF", "GPU")

# Reference measurements for the four-voice emotional corpus
# (female: bea, jenie; male: josh, sam).
REFERENCE_TIMINGS = (
    ("classifier", "bea", "female", "amused", "0173", 0.52, 7),
    ("manual", "bea", "female", "amused", "0173", 0.55, 7),
    ("manual", "bea", "female", "neutral", "0173", 0.54, 7),
    ("manual", "jenie", "female", "amused", "0140", 0.56, 8),
    ("manual", "jenie", "female", "neutral", "0173", 0.73, 7),
    ("manual", "josh", "male", "amused", "0173", 0.48, 7),
    ("manual", "josh", "male", "neutral", "0173", 0.46, 7),
    ("manual", "sam", "male", "amused", "0173", 0.58, 7),
    ("manual", "sam", "male", "neutral", "0173", 0.47, 7),
)

REFERENCE_RTF = (
    ("NaturalSpeech", "HiFi-GAN", 0.013, "V100"),
    ("Glow-TTS", "HiFi-GAN", 0.021, "V100"),
    ("Grad-TTS(100)", "HiFi-GAN", 4.120, "V100"),
    ("VITS", "HiFi-GAN", 0.014, "V100"),
    ("Emotional TTS", "HiFi-GAN", 0.080, "A100"),
)

REFERENCE_RMSE = (
    ("bea", "female", "amused", "0173", 0.1803),
    ("bea", "female", "neutral", "0173", 0.1683),
    ("jenie", "female", "amused", "0173", 0.0724),
    ("jenie", "female", "neutral", "0140", 0.1662),
    ("josh", "male", "amused", "0173", 0.1576),
    ("josh", "male", "neutral", "0173", 0.1769),
    ("sam", "male", "amused", "0173", 0.1290),
    ("sam", "male", "neutral", "0173", 0.1694),
)


def hardware_descriptor() -> dict:
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "processor": platform.processor() or platform.machine(),
        "cpu_count": os.cpu_count(),
        "python": sys.version.split()[0],
    }


def _format_text_table(columns, rows, footer=()) -> str:
    cells = [[str(c) for c in columns]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    lines = []
    for r, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * w for w in widths))
    for note in footer:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(columns)
        writer.writerows(rows)


def _timing_rows(timing_results) -> list:
    rows = [
        (
            t.method, t.speaker, t.gender, t.emotion, t.sample_id,
            f"{t.wall_seconds:.3f}", t.word_count,
        )
        for t in timing_results
    ]
    return sorted(rows, key=lambda r: (r[1], r[3], r[0]))


def _rmse_rows(rmse_results) -> list:
    rows = [
        (r.speaker, speaker_gender(r.speaker), r.emotion, r.sample_id, f"{r.rmse:.4f}")
        for r in rmse_results
    ]
    return sorted(rows, key=lambda r: (r[0], r[2]))


def _missing_notes(results, speakers, emotions) -> list:
    present = {(r.speaker, r.emotion) for r in results}
    return [
        f"no samples for speaker {s!r} emotion {e!r}"
        for s in sorted(speakers)
        for e in emotions
        if (s, e) not in present
    ]


def emit_report(
    timing_results=(),
    rmse_results=(),
    out_dir=".",
    expected_emotions=None,
    rtf_reference=False,
) -> dict:
    """Write CSV + aligned-text tables and a JSON run log; returns the paths.

    Rows are keyed by (speaker, gender, emotion, sample id). Speaker/emotion
    combinations with no results are omitted from the tables and noted in
    the footer. ``rtf_reference`` additionally writes the published RTF
    comparison rows.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not timing_results and not rmse_results:
        raise ValueError("emit_report needs at least one result")
    paths = {}

    if timing_results:
        emotions = expected_emotions or sorted({t.emotion for t in timing_results})
        speakers = {t.speaker for t in timing_results}
        rows = _timing_rows(timing_results)
        footer = _missing_notes(timing_results, speakers, emotions)
        _write_csv(out_dir / "timing.csv", TIMING_COLUMNS, rows)
        (out_dir / "timing.txt").write_text(
            _format_text_table(TIMING_COLUMNS, rows, footer), encoding="utf-8"
        )
        paths["timing_csv"] = out_dir / "timing.csv"
        paths["timing_txt"] = out_dir / "timing.txt"

    if rmse_results:
        emotions = expected_emotions or sorted({r.emotion for r in rmse_results})
        speakers = {r.speaker for r in rmse_results}
        rows = _rmse_rows(rmse_results)
        footer = _missing_notes(rmse_results, speakers, emotions)
        _write_csv(out_dir / "rmse.csv", RMSE_COLUMNS, rows)
        (out_dir / "rmse.txt").write_text(
            _format_text_table(RMSE_COLUMNS, rows, footer), encoding="utf-8"
        )
        paths["rmse_csv"] = out_dir / "rmse.csv"
        paths["rmse_txt"] = out_dir / "rmse.txt"

    if rtf_reference:
        _write_csv(out_dir / "rtf_reference.csv", RTF_COLUMNS, REFERENCE_RTF)
        paths["rtf_reference_csv"] = out_dir / "rtf_reference.csv"

    log = {
        "hardware": hardware_descriptor(),
        "timing": [
            {
                "method": t.method, "speaker": t.speaker, "gender": t.gender,
                "emotion": t.emotion, "sample_id": t.sample_id,
                "wall_seconds": t.wall_seconds, "words": t.word_count,
                "audio_seconds": t.audio_seconds, "rtf": t.rtf,
                "repeats": t.repeats,
            }
            for t in timing_results
        ],
        "rmse": [
            {
                "speaker": r.speaker, "emotion": r.emotion,
                "sample_id": r.sample_id, "rmse": r.rmse, "padded": r.padded,
            }
            for r in rmse_results
        ],
    }
    (out_dir / "run.json").write_text(json.dumps(log, indent=2), encoding="utf-8")
    paths["run_json"] = out_dir / "run.json"
    return paths
