import numpy as np
import pytest
import torch


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if "test_acceptance" in report.nodeid and report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {verdict}: {name} ({report.duration:.1f}s)")

from emotts.acoustic import AcousticConfig, AcousticModel
from emotts.corpus import FeatureConfig, build_dataset, generate_toy_corpus
from emotts.emoclass import train_classifier
from emotts.synthesizer import Synthesizer, write_bundle

AUTHOR_TEXTGRID = """File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.06
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 1.06
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.66
            text = "AO1"
        intervals [2]:
            xmin = 0.66
            xmax = 0.94
            text = "TH"
        intervals [3]:
            xmin = 0.94
            xmax = 1.06
            text = "ER0"
"""

METADATA_LINE = (
    "neutral_281-308_0287|bea|{K IY1 P AH0 N AY1 AA1 N HH IH1 M}|"
    "Keep an eye on him.|neutral"
)


def tiny_acoustic_config(n_speakers=4, **overrides):
    defaults = dict(
        n_speakers=n_speakers,
        encoder_layers=2,
        decoder_layers=2,
        encoder_hidden=64,
        decoder_hidden=64,
        fft_inner=128,
        variance_filter=64,
        variance_bins=64,
        postnet_channels=64,
    )
    defaults.update(overrides)
    return AcousticConfig(**defaults)


def make_tiny_model(seed=0, **overrides) -> AcousticModel:
    torch.manual_seed(seed)
    return AcousticModel(tiny_acoustic_config(**overrides))


KEYWORD_BY_EMOTION = {
    "amused": "hilarious",
    "anger": "furious",
    "disgust": "revolting",
    "neutral": "ordinary",
    "sleepiness": "drowsy",
}

_FILLER = "the a of to and it was on in at day with from".split()


def separable_classifier_set(per_class=40, seed=0):
    """Each class marked by its own keyword amid shuffled filler."""
    rng = np.random.default_rng(seed)
    data = []
    for label, keyword in KEYWORD_BY_EMOTION.items():
        for _ in range(per_class):
            words = list(rng.choice(_FILLER, size=6)) + [keyword]
            rng.shuffle(words)
            data.append((" ".join(words), label))
    return data


@pytest.fixture(scope="session")
def toy_corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("toycorpus")
    audio_dir, textgrid_dir, metadata = generate_toy_corpus(root, n_utterances=4, seed=1)
    return {"audio": audio_dir, "textgrid": textgrid_dir, "metadata": metadata, "root": root}


@pytest.fixture(scope="session")
def toy_dataset(toy_corpus_dir):
    return build_dataset(
        toy_corpus_dir["audio"],
        toy_corpus_dir["textgrid"],
        toy_corpus_dir["metadata"],
        FeatureConfig(),
    )


@pytest.fixture(scope="session")
def tiny_classifier():
    return train_classifier(separable_classifier_set(per_class=8), epochs=30, seed=0)


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory, tiny_classifier):
    """Untrained tiny bundle: enough for surface/determinism tests."""
    path = tmp_path_factory.mktemp("bundle")
    model = make_tiny_model(seed=0)
    speakers = {"bea": 0, "jenie": 1, "josh": 2, "sam": 3}
    write_bundle(path, model, speakers, FeatureConfig(), classifier=tiny_classifier)
    return path


@pytest.fixture(scope="session")
def synthesizer(bundle_dir):
    return Synthesizer.from_dir(bundle_dir)
