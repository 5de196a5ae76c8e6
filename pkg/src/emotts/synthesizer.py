"""End-to-end synthesis: text frontend -> (optional) emotion classifier ->
acoustic model -> vocoder, with per-stage timings and diagnostics.

A Synthesizer holds immutable loaded models and is safe for concurrent
callers; requests are independent and eval-mode deterministic.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .acoustic.io import load_acoustic, save_acoustic
from .acoustic.model import AcousticModel, predicted_frames
from .corpus.features import FeatureConfig, MelSpectrogram
from .emoclass.model import ClassifierBundle
from .emotions import ID_TO_EMOTION, N_EMOTIONS, write_emotions_json
from .errors import EmptyTextError, ModelNotLoaded, UnknownSpeaker
from .speakers import write_speakers_json
from .textfront import PronunciationLexicon, g2p, normalize_text
from .textfront.phonemes import phonemes_to_ids
from .vocoder.generator import MelGenerator, load_generator, save_generator
from .vocoder.griffin_lim import griffin_lim
from .vocoder.wavio import Waveform

ACOUSTIC_FILE = "acoustic.ckpt"
CLASSIFIER_FILE = "classifier.ckpt"
VOCODER_FILE = "vocoder.ckpt"
SPEAKERS_FILE = "speakers.json"
EMOTIONS_FILE = "emotions.json"


@dataclass(frozen=True)
class SynthesisRequest:
    text: str
    speaker_id: str
    emotion: int = None  # manual id 0..4, or None for auto-detection
    seed: int = 0

    def __post_init__(self):
        if self.emotion is not None and not 0 <= int(self.emotion) < N_EMOTIONS:
            raise ValueError(f"manual emotion id must be 0..{N_EMOTIONS - 1}")

    @property
    def is_auto(self) -> bool:
        return self.emotion is None


@dataclass
class SynthesisDiagnostics:
    emotion_id: int
    emotion_name: str
    emotion_source: str
    phonemes: tuple
    log_durations: np.ndarray
    pitch: np.ndarray
    energy: np.ndarray
    frames: int
    mel: np.ndarray
    timings: dict = field(default_factory=dict)


class Synthesizer:
    def __init__(
        self,
        acoustic_model: AcousticModel,
        speakers: dict,
        feature_config: FeatureConfig,
        lexicon: PronunciationLexicon = None,
        classifier: ClassifierBundle = None,
        generator: MelGenerator = None,
        vocoder: str = "griffin_lim",
        griffin_lim_iterations: int = 32,
    ):
        if vocoder not in ("griffin_lim", "neural"):
            raise ValueError("vocoder must be 'griffin_lim' or 'neural'")
        if vocoder == "neural" and generator is None:
            raise ModelNotLoaded("neural vocoder selected but no generator loaded")
        self.acoustic = acoustic_model.eval()
        self.speakers = dict(speakers)
        self.feature_config = feature_config
        self.lexicon = lexicon or PronunciationLexicon.load()
        self.classifier = classifier
        self.generator = generator.eval() if generator is not None else None
        self.vocoder = vocoder
        self.griffin_lim_iterations = griffin_lim_iterations

    def resolve_emotion(self, request: SynthesisRequest, text: str):
        """(emotion_id, source); auto mode consults the classifier."""
        if not request.is_auto:
            return int(request.emotion), "manual"
        if self.classifier is None:
            raise ModelNotLoaded("auto emotion requested but no classifier loaded")
        return self.classifier.predict_emotion_id(text), "classifier"

    def synthesize(self, request: SynthesisRequest):
        """Returns (Waveform, SynthesisDiagnostics)."""
        if request.speaker_id not in self.speakers:
            raise UnknownSpeaker(
                f"unknown speaker {request.speaker_id!r}; "
                f"known: {', '.join(sorted(self.speakers))}"
            )
        timings = {}
        start_total = time.perf_counter()

        start = time.perf_counter()
        norm = normalize_text(request.text)
        if not norm.text:
            raise EmptyTextError("text normalizes to nothing; no audio to synthesize")
        phoneme_seq = g2p(norm, self.lexicon)
        timings["frontend_s"] = time.perf_counter() - start

        start = time.perf_counter()
        emotion_id, source = self.resolve_emotion(request, request.text)
        timings["classifier_s"] = time.perf_counter() - start

        start = time.perf_counter()
        torch.manual_seed(request.seed)
        mel, diag_arrays = self._run_acoustic(phoneme_seq.ids(), request.speaker_id, emotion_id)
        timings["acoustic_s"] = time.perf_counter() - start

        start = time.perf_counter()
        waveform = self._run_vocoder(mel)
        timings["vocoder_s"] = time.perf_counter() - start
        timings["total_s"] = time.perf_counter() - start_total

        diagnostics = SynthesisDiagnostics(
            emotion_id=emotion_id,
            emotion_name=ID_TO_EMOTION[emotion_id],
            emotion_source=source,
            phonemes=tuple(phoneme_seq.phonemes),
            frames=mel.num_frames,
            mel=mel.values,
            timings=timings,
            **diag_arrays,
        )
        return waveform, diagnostics

    def _run_acoustic(self, phoneme_ids, speaker: str, emotion_id: int):
        model = self.acoustic
        with torch.no_grad():
            ids = torch.tensor([phoneme_ids], dtype=torch.long)
            lengths = torch.tensor([len(phoneme_ids)], dtype=torch.long)
            speaker_ids = torch.tensor([self.speakers[speaker]], dtype=torch.long)
            emotion_ids = torch.tensor([emotion_id], dtype=torch.long)
            out = model(ids, lengths, speaker_ids, emotion_ids)
            frames = int(out["mel_lengths"][0].item())
            if frames == 0:
                raise EmptyTextError("model predicted zero total duration")
            mel_values = out["mel_after"][0, :frames].cpu().numpy().astype(np.float64)
        mel = MelSpectrogram(
            mel_values, self.feature_config.sample_rate, self.feature_config.hop_length
        )
        diag = {
            "log_durations": out["log_durations"][0].cpu().numpy(),
            "pitch": out["pitch"][0].cpu().numpy(),
            "energy": out["energy"][0].cpu().numpy(),
        }
        return mel, diag

    def _run_vocoder(self, mel: MelSpectrogram) -> Waveform:
        if self.vocoder == "neural":
            from .vocoder.generator import hifigan_generate

            return hifigan_generate(mel, self.generator)
        return griffin_lim(mel, self.feature_config, self.griffin_lim_iterations)

    @classmethod
    def from_dir(cls, bundle_dir, vocoder: str = None, **kwargs) -> "Synthesizer":
        """Load a checkpoint directory written by write_bundle."""
        bundle_dir = Path(bundle_dir)
        acoustic_path = bundle_dir / ACOUSTIC_FILE
        if not acoustic_path.exists():
            raise ModelNotLoaded(f"no acoustic checkpoint at {acoustic_path}")
        model, speakers, feature_config = load_acoustic(acoustic_path)

        classifier = None
        if (bundle_dir / CLASSIFIER_FILE).exists():
            classifier = ClassifierBundle.load(bundle_dir / CLASSIFIER_FILE)
        generator = None
        if (bundle_dir / VOCODER_FILE).exists():
            generator = load_generator(bundle_dir / VOCODER_FILE)
        if vocoder is None:
            vocoder = "neural" if generator is not None else "griffin_lim"

        lexicon_path = bundle_dir / "lexicon.dict"
        lexicon = PronunciationLexicon.load(lexicon_path if lexicon_path.exists() else None)
        return cls(
            model, speakers, feature_config,
            lexicon=lexicon, classifier=classifier, generator=generator,
            vocoder=vocoder, **kwargs,
        )


def write_bundle(
    bundle_dir,
    acoustic_model: AcousticModel,
    speakers: dict,
    feature_config: FeatureConfig,
    classifier: ClassifierBundle = None,
    generator: MelGenerator = None,
) -> Path:
    """Persist a loadable checkpoint directory (speakers.json, emotions.json,
    acoustic/classifier/vocoder checkpoints)."""
    bundle_dir = Path(bundle_dir)
    bundle_dir.mkdir(parents=True, exist_ok=True)
    save_acoustic(bundle_dir / ACOUSTIC_FILE, acoustic_model, speakers, feature_config)
    write_speakers_json(speakers, bundle_dir / SPEAKERS_FILE)
    write_emotions_json(bundle_dir / EMOTIONS_FILE)
    if classifier is not None:
        classifier.save(bundle_dir / CLASSIFIER_FILE)
    if generator is not None:
        save_generator(bundle_dir / VOCODER_FILE, generator)
    return bundle_dir
