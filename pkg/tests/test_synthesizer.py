import numpy as np
import pytest
import torch

from conftest import make_tiny_model
from emotts.corpus import FeatureConfig
from emotts.emoclass import ClassifierBundle, ClassifierConfig, EmotionClassifier
from emotts.errors import EmptyTextError, ModelNotLoaded, UnknownSpeaker
from emotts.synthesizer import SynthesisRequest, Synthesizer, write_bundle
from emotts.textfront import TokenVocabulary
from emotts.vocoder import wav_bytes

SPEAKERS = {"bea": 0, "jenie": 1, "josh": 2, "sam": 3}


def forced_classifier(emotion_id: int) -> ClassifierBundle:
    """A classifier rigged to always predict one emotion."""
    torch.manual_seed(0)
    vocab = TokenVocabulary.from_texts(["keep an eye on him"])
    model = EmotionClassifier(
        ClassifierConfig(vocab_size=len(vocab), n_layers=1, hidden=16, ffn=32)
    )
    with torch.no_grad():
        model.head_out.weight.zero_()
        model.head_out.bias.zero_()
        model.head_out.bias[emotion_id] = 10.0
    return ClassifierBundle(model.eval(), vocab)


@pytest.fixture(scope="module")
def pipeline():
    model = make_tiny_model(seed=0)
    return Synthesizer(
        model, SPEAKERS, FeatureConfig(), classifier=forced_classifier(3)
    )


class TestSynthesize:
    def test_request_validation(self):
        with pytest.raises(ValueError):
            SynthesisRequest("x", "bea", emotion=7)

    def test_manual_equals_auto_when_classifier_forced(self, pipeline):
        text = "Keep an eye on him."
        manual, diag_manual = pipeline.synthesize(
            SynthesisRequest(text, "bea", emotion=3, seed=0)
        )
        auto, diag_auto = pipeline.synthesize(SynthesisRequest(text, "bea", seed=0))
        assert diag_manual.emotion_source == "manual"
        assert diag_auto.emotion_source == "classifier"
        assert diag_auto.emotion_id == 3
        assert wav_bytes(manual) == wav_bytes(auto)

    def test_emotion_changes_mel_with_shape_preserved(self, pipeline):
        model = pipeline.acoustic
        ids = torch.tensor([[5, 9, 30, 41]])
        lengths = torch.tensor([4])
        speaker = torch.tensor([0])
        durations = torch.tensor([[3, 2, 4, 3]])
        with torch.no_grad():
            a = model(ids, lengths, speaker, torch.tensor([0]), durations)
            b = model(ids, lengths, speaker, torch.tensor([3]), durations)
        assert a["mel_after"].shape == b["mel_after"].shape
        l1 = float((a["mel_after"] - b["mel_after"]).abs().mean())
        assert l1 > 0

    def test_diagnostics_contents(self, pipeline):
        waveform, diag = pipeline.synthesize(
            SynthesisRequest("good morning", "sam", emotion=1)
        )
        n_phonemes = len(diag.phonemes)
        assert n_phonemes > 0
        assert diag.log_durations.shape == (n_phonemes,)
        assert diag.pitch.shape == (n_phonemes,)
        assert diag.energy.shape == (n_phonemes,)
        assert diag.mel.shape == (diag.frames, 80)
        assert diag.emotion_name == "anger"
        for key in ("frontend_s", "classifier_s", "acoustic_s", "vocoder_s", "total_s"):
            assert diag.timings[key] >= 0
        assert len(waveform) == diag.frames * 256

    def test_unknown_speaker(self, pipeline):
        with pytest.raises(UnknownSpeaker):
            pipeline.synthesize(SynthesisRequest("hello", "nobody", emotion=0))

    def test_empty_text(self, pipeline):
        with pytest.raises(EmptyTextError):
            pipeline.synthesize(SynthesisRequest("?!...", "bea", emotion=0))

    def test_auto_without_classifier(self):
        bare = Synthesizer(make_tiny_model(seed=1), SPEAKERS, FeatureConfig())
        with pytest.raises(ModelNotLoaded):
            bare.synthesize(SynthesisRequest("hello", "bea"))

    def test_deterministic_across_instances(self, tmp_path):
        model = make_tiny_model(seed=2)
        write_bundle(tmp_path, model, SPEAKERS, FeatureConfig())
        a = Synthesizer.from_dir(tmp_path)
        b = Synthesizer.from_dir(tmp_path)
        request = SynthesisRequest("the green tree", "jenie", emotion=2, seed=1)
        wav_a, _ = a.synthesize(request)
        wav_b, _ = b.synthesize(request)
        assert np.array_equal(wav_a.samples, wav_b.samples)

    def test_neural_vocoder_path(self, tmp_path):
        from emotts.vocoder import GeneratorConfig, MelGenerator

        torch.manual_seed(0)
        generator = MelGenerator(GeneratorConfig(n_mels=80, initial_channels=32))
        model = make_tiny_model(seed=3)
        synthesizer = Synthesizer(
            model, SPEAKERS, FeatureConfig(), generator=generator, vocoder="neural"
        )
        waveform, diag = synthesizer.synthesize(
            SynthesisRequest("a big dog", "josh", emotion=4)
        )
        assert len(waveform) == diag.frames * 256

    def test_vocoder_choice_validated(self):
        with pytest.raises(ValueError):
            Synthesizer(make_tiny_model(), SPEAKERS, FeatureConfig(), vocoder="mystery")
        with pytest.raises(ModelNotLoaded):
            Synthesizer(make_tiny_model(), SPEAKERS, FeatureConfig(), vocoder="neural")
