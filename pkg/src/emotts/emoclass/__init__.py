"""Text emotion classification: 5-way label distribution and the emotion id
used to condition synthesis.
"""

from ..emotions import EMOTION_NAMES, EMOTION_TO_ID, ID_TO_EMOTION, EmotionLabel
from .model import (
    ClassifierBundle,
    ClassifierConfig,
    ClassifierOutput,
    EmotionClassifier,
    TextClassifierBackend,
    classify,
)
from .train import macro_f1, train_classifier

__all__ = [
    "ClassifierBundle",
    "ClassifierConfig",
    "ClassifierOutput",
    "EmotionClassifier",
    "EmotionLabel",
    "EMOTION_NAMES",
    "EMOTION_TO_ID",
    "ID_TO_EMOTION",
    "TextClassifierBackend",
    "classify",
    "macro_f1",
    "train_classifier",
]
