import csv
import itertools
import json

import numpy as np
import pytest

import emotts.evalkit.timing as timing_module
from emotts.errors import RateMismatch
from emotts.evalkit import (
    REFERENCE_RMSE,
    REFERENCE_RTF,
    REFERENCE_TIMINGS,
    RMSE_COLUMNS,
    TIMING_COLUMNS,
    RmseResult,
    TimingResult,
    emit_report,
    rmse_waveforms,
    time_synthesis,
)
from emotts.vocoder import Waveform


def wav(values):
    return Waveform(np.asarray(values, dtype=np.float64), 22050)


class TestRmse:
    def test_identity_zero(self):
        a = wav(np.random.default_rng(0).normal(size=50) * 0.1)
        assert rmse_waveforms(a, a).rmse == 0.0

    def test_negation_hand_value(self):
        a = wav([0.5, -0.5])
        b = wav([-0.5, 0.5])
        assert rmse_waveforms(a, b).rmse == pytest.approx(1.0, abs=1e-12)

    def test_trailing_zero_pad(self):
        a = wav([0.1, 0.2, 0.3])
        b = wav([0.1, 0.2, 0.3, 0.0, 0.0])
        result = rmse_waveforms(a, b)
        assert result.rmse == 0.0
        assert result.padded

    def test_rate_mismatch(self):
        with pytest.raises(RateMismatch):
            rmse_waveforms(wav([0.1]), Waveform(np.array([0.1]), 16000))

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        a, b = wav(rng.normal(size=30)), wav(rng.normal(size=24))
        assert rmse_waveforms(a, b).rmse == rmse_waveforms(b, a).rmse

    def test_linear_scaling(self):
        rng = np.random.default_rng(2)
        a, b = wav(rng.normal(size=40) * 0.2), wav(rng.normal(size=40) * 0.2)
        base = rmse_waveforms(a, b).rmse
        for c in (0.5, 2.0, -3.0):
            scaled = rmse_waveforms(wav(c * a.samples), wav(c * b.samples)).rmse
            assert scaled == pytest.approx(abs(c) * base, rel=1e-9)


class FakeSynthesizer:
    """Returns a fixed waveform; used with a scripted clock."""

    def __init__(self, seconds=2.0):
        self.waveform = Waveform(np.zeros(int(22050 * seconds)) + 0.01, 22050)
        self.calls = 0

    def synthesize(self, request):
        self.calls += 1

        class Diag:
            emotion_name = "neutral"

        return self.waveform, Diag()


class FakeRequest:
    text = "six words are in this text"
    speaker_id = "bea"
    is_auto = False


class TestTiming:
    def test_median_of_repeats(self, monkeypatch):
        # Scripted perf_counter: warmup, then 5 timed runs of
        # 0.30, 0.10, 0.50, 0.20, 0.40 seconds.
        durations = [0.30, 0.10, 0.50, 0.20, 0.40]
        ticks = []
        cursor = 0.0
        for d in durations:
            ticks.extend([cursor, cursor + d])
            cursor += d
        clock = itertools.chain(ticks, itertools.count(1000.0))
        monkeypatch.setattr(timing_module.time, "perf_counter", lambda: next(clock))

        synthesizer = FakeSynthesizer(seconds=2.0)
        result = time_synthesis(synthesizer, FakeRequest(), repeats=5)
        assert synthesizer.calls == 6  # warmup + 5
        assert result.wall_seconds == pytest.approx(0.30)
        assert result.repeats == 5

    def test_rtf_ratio(self):
        result = TimingResult(
            method="manual", speaker="bea", emotion="neutral", sample_id="x",
            wall_seconds=0.16, word_count=6, audio_seconds=2.0, repeats=1,
        )
        assert result.rtf == pytest.approx(0.08)
        assert result.gender == "female"

    def test_manual_and_classifier_methods(self, synthesizer):
        from emotts.synthesizer import SynthesisRequest

        manual = time_synthesis(
            synthesizer, SynthesisRequest("good morning", "bea", emotion=3), repeats=1
        )
        auto = time_synthesis(
            synthesizer, SynthesisRequest("good morning", "bea"), repeats=1
        )
        assert manual.method == "manual"
        assert auto.method == "classifier"
        assert manual.rtf > 0 and auto.rtf > 0

    def test_invalid_repeats(self, synthesizer):
        from emotts.synthesizer import SynthesisRequest

        with pytest.raises(ValueError):
            time_synthesis(synthesizer, SynthesisRequest("hi", "bea", emotion=0), repeats=0)


def reference_timing_results():
    return [
        TimingResult(
            method=m, speaker=s, emotion=e, sample_id=sid,
            wall_seconds=t, word_count=w, audio_seconds=1.0, repeats=1,
        )
        for m, s, _, e, sid, t, w in REFERENCE_TIMINGS
    ]


def reference_rmse_results():
    return [
        RmseResult(rmse=v, padded=True, speaker=s, emotion=e, sample_id=sid)
        for s, _, e, sid, v in REFERENCE_RMSE
    ]


class TestReport:
    def test_eight_row_table_shape(self, tmp_path):
        results = [t for t in reference_timing_results() if t.method == "manual"]
        assert len(results) == 8  # 4 speakers x 2 emotions
        paths = emit_report(timing_results=results, out_dir=tmp_path)
        with open(paths["timing_csv"], newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == list(TIMING_COLUMNS)
        assert len(rows) == 9
        genders = {r[1]: r[2] for r in rows[1:]}
        assert genders == {
            "bea": "female", "jenie": "female", "josh": "male", "sam": "male",
        }

    def test_reference_rmse_rows(self, tmp_path):
        paths = emit_report(rmse_results=reference_rmse_results(), out_dir=tmp_path)
        with open(paths["rmse_csv"], newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == list(RMSE_COLUMNS)
        assert len(rows) == 9
        by_key = {(r[0], r[2]): float(r[4]) for r in rows[1:]}
        assert by_key[("bea", "amused")] == pytest.approx(0.1803)

    def test_missing_subset_footnoted(self, tmp_path):
        results = [
            t for t in reference_timing_results()
            if not (t.speaker == "josh" and t.emotion == "amused")
            and t.method == "manual"
        ]
        emit_report(
            timing_results=results, out_dir=tmp_path,
            expected_emotions=("amused", "neutral"),
        )
        text = (tmp_path / "timing.txt").read_text()
        assert "note: no samples for speaker 'josh' emotion 'amused'" in text
        assert "josh" in text  # josh's neutral row still present

    def test_single_result(self, tmp_path):
        emit_report(timing_results=reference_timing_results()[:1], out_dir=tmp_path)
        lines = (tmp_path / "timing.txt").read_text().splitlines()
        assert len([l for l in lines if l and not l.startswith(("note:", "-"))]) == 2

    def test_run_log_hardware_metadata(self, tmp_path):
        emit_report(
            timing_results=reference_timing_results()[:2],
            rmse_results=reference_rmse_results()[:2],
            out_dir=tmp_path,
            rtf_reference=True,
        )
        log = json.loads((tmp_path / "run.json").read_text())
        assert log["hardware"]["cpu_count"] >= 1
        assert log["hardware"]["platform"]
        assert all(entry["rtf"] > 0 for entry in log["timing"])
        with open(tmp_path / "rtf_reference.csv", newline="") as f:
            rows = list(csv.reader(f))
        assert len(rows) == len(REFERENCE_RTF) + 1
        ours = [r for r in rows if r[0] == "Emotional TTS"]
        assert ours and float(ours[0][2]) == pytest.approx(0.080)

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(out_dir=tmp_path)
