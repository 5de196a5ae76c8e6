import struct
import wave

import numpy as np
import pytest
import torch

from emotts.checkpoint import load_state_into
from emotts.corpus import FeatureConfig, MelSpectrogram, extract_mel
from emotts.errors import IoError, WeightMismatch
from emotts.vocoder import (
    GeneratorConfig,
    MelGenerator,
    Waveform,
    griffin_lim,
    hifigan_generate,
    import_official_state,
    load_generator,
    mel_to_linear,
    read_wav,
    save_generator,
    spectral_convergence,
    wav_bytes,
    write_wav,
)

CFG = FeatureConfig()


def sine_mel(freq=440.0, seconds=1.0):
    t = np.arange(int(CFG.sample_rate * seconds)) / CFG.sample_rate
    return extract_mel(0.5 * np.sin(2 * np.pi * freq * t), CFG)


@pytest.fixture(scope="module")
def small_generator():
    torch.manual_seed(0)
    return MelGenerator(GeneratorConfig(n_mels=16, initial_channels=32)).eval()


class TestGriffinLim:
    def test_recovers_sine_frequency(self):
        mel = sine_mel(440.0)
        waveform = griffin_lim(mel, CFG, iterations=32)
        assert len(waveform) == mel.num_frames * CFG.hop_length
        spectrum = np.abs(np.fft.rfft(waveform.samples))
        peak_hz = np.argmax(spectrum) * CFG.sample_rate / len(waveform)
        bin_width = CFG.sample_rate / CFG.n_fft
        assert abs(peak_hz - 440.0) <= bin_width

    def test_silence_is_quiet(self):
        mel = extract_mel(np.zeros(CFG.sample_rate), CFG)
        waveform = griffin_lim(mel, CFG, iterations=4)
        assert float(np.sqrt(np.mean(waveform.samples ** 2))) < 1e-3

    def test_residual_nonincreasing_in_iterations(self):
        mel = sine_mel(330.0, seconds=0.5)
        target = mel_to_linear(mel, CFG)
        errors = [
            spectral_convergence(griffin_lim(mel, CFG, iterations=i), target, CFG)
            for i in (0, 8, 32)
        ]
        assert errors[0] >= errors[1] >= errors[2]

    def test_output_bounded(self):
        waveform = griffin_lim(sine_mel(220.0, 0.3), CFG, iterations=8)
        assert np.all(np.abs(waveform.samples) <= 1.0)


class TestGenerator:
    @pytest.mark.parametrize("frames", [1, 7, 91])
    def test_length_law(self, small_generator, frames):
        rng = np.random.default_rng(0)
        mel = MelSpectrogram(rng.normal(size=(frames, 16)), 22050, 256)
        waveform = hifigan_generate(mel, small_generator)
        assert len(waveform) == frames * 256
        assert waveform.sample_rate == 22050

    def test_upsampling_product_matches_hop(self):
        assert GeneratorConfig().total_upsampling == 256

    def test_zero_mel_finite_bounded(self, small_generator):
        mel = MelSpectrogram(np.zeros((5, 16)), 22050, 256)
        waveform = hifigan_generate(mel, small_generator)
        assert np.all(np.isfinite(waveform.samples))
        assert np.all(np.abs(waveform.samples) <= 1.0)

    def test_hop_mismatch_rejected(self, small_generator):
        mel = MelSpectrogram(np.zeros((4, 16)), 22050, 128)
        with pytest.raises(WeightMismatch):
            hifigan_generate(mel, small_generator)

    def test_weight_mismatch_names_first_layer(self, small_generator):
        state = {
            k: v.numpy() for k, v in small_generator.state_dict().items()
        }
        state["conv_pre.weight"] = state["conv_pre.weight"][:, :4]
        fresh = MelGenerator(small_generator.config)
        with pytest.raises(WeightMismatch) as err:
            load_state_into(fresh, state)
        assert err.value.layer == "conv_pre.weight"

    def test_feed_forward_locality(self, small_generator):
        rng = np.random.default_rng(3)
        base = rng.normal(size=(60, 16))
        perturbed = base.copy()
        perturbed[59] += 10.0
        out_a = hifigan_generate(MelSpectrogram(base, 22050, 256), small_generator)
        out_b = hifigan_generate(MelSpectrogram(perturbed, 22050, 256), small_generator)
        diff = np.abs(out_a.samples - out_b.samples)
        changed = np.nonzero(diff)[0]
        assert changed.size > 0
        # Perturbing the final frame cannot reach the first half of the audio.
        assert changed.min() > len(out_a) // 2

    def test_checkpoint_round_trip(self, small_generator, tmp_path):
        path = tmp_path / "vocoder.ckpt"
        save_generator(path, small_generator)
        loaded = load_generator(path)
        mel = MelSpectrogram(np.random.default_rng(1).normal(size=(9, 16)), 22050, 256)
        a = hifigan_generate(mel, small_generator)
        b = hifigan_generate(mel, loaded)
        assert np.array_equal(a.samples, b.samples)

    def test_official_import_fuses_weight_norm(self, small_generator):
        official = {}
        for name, tensor in small_generator.state_dict().items():
            key = name.replace(".convs_dilated.", ".convs1.").replace(
                ".convs_unit.", ".convs2."
            )
            value = tensor.numpy()
            if name.endswith(".weight"):
                axes = tuple(range(1, value.ndim))
                norm = np.sqrt((value ** 2).sum(axis=axes, keepdims=True))
                official[key.replace(".weight", ".weight_v")] = value
                official[key.replace(".weight", ".weight_g")] = norm
            else:
                official[key] = value
        mapped = import_official_state(official, small_generator.config)
        clone = MelGenerator(small_generator.config)
        load_state_into(clone, mapped)
        clone.eval()
        mel = MelSpectrogram(np.random.default_rng(2).normal(size=(6, 16)), 22050, 256)
        a = hifigan_generate(mel, small_generator)
        b = hifigan_generate(mel, clone)
        assert np.allclose(a.samples, b.samples, atol=1e-6)


class TestWavIO:
    def test_round_trip_quantization_bound(self, tmp_path):
        ramp = Waveform(np.linspace(-1.0, 1.0, 22050), 22050)
        path = tmp_path / "ramp.wav"
        write_wav(ramp, path)
        back = read_wav(path)
        assert back.sample_rate == 22050
        assert np.max(np.abs(back.samples - ramp.samples)) <= 1 / 32768

    def test_header_fields(self, tmp_path):
        path = tmp_path / "tone.wav"
        write_wav(Waveform(np.zeros(100) + 0.1, 22050), path)
        blob = path.read_bytes()
        assert blob[:4] == b"RIFF" and blob[8:12] == b"WAVE"
        fmt_at = blob.index(b"fmt ")
        audio_format, channels = struct.unpack_from("<HH", blob, fmt_at + 8)
        rate = struct.unpack_from("<I", blob, fmt_at + 12)[0]
        bits = struct.unpack_from("<H", blob, fmt_at + 22)[0]
        assert audio_format == 1  # PCM
        assert channels == 1
        assert rate == 22050
        assert bits == 16

    def test_empty_refused(self, tmp_path):
        with pytest.raises(IoError):
            write_wav(Waveform(np.array([]), 22050), tmp_path / "empty.wav")
        with pytest.raises(IoError):
            wav_bytes(Waveform(np.array([]), 22050))

    def test_wav_bytes_matches_file(self, tmp_path):
        waveform = Waveform(np.sin(np.linspace(0, 20, 500)), 22050)
        path = tmp_path / "x.wav"
        write_wav(waveform, path)
        assert wav_bytes(waveform) == path.read_bytes()

    def test_clipping_out_of_range(self, tmp_path):
        loud = Waveform(np.array([2.0, -2.0, 0.5]), 22050)
        path = tmp_path / "loud.wav"
        write_wav(loud, path)
        back = read_wav(path)
        assert np.max(np.abs(back.samples)) <= 1.0

    def test_stereo_downmix(self, tmp_path):
        path = tmp_path / "stereo.wav"
        with wave.open(str(path), "wb") as f:
            f.setnchannels(2)
            f.setsampwidth(2)
            f.setframerate(22050)
            left = np.full(50, 16000, dtype="<i2")
            right = np.zeros(50, dtype="<i2")
            f.writeframes(np.column_stack([left, right]).tobytes())
        back = read_wav(path)
        assert back.samples.shape == (50,)
        assert np.allclose(back.samples, 16000 / 32767 / 2, atol=1e-4)

    def test_unreadable(self, tmp_path):
        bad = tmp_path / "bad.wav"
        bad.write_bytes(b"not a wav")
        with pytest.raises(IoError):
            read_wav(bad)
