"""emotts: an emotion-aware text-to-speech toolkit.

Subpackages are imported lazily where heavy (torch-backed model code); the
text frontend and corpus tooling are plain numpy/scipy.
"""

__version__ = "0.1.0"

from . import errors
from .emotions import EMOTION_NAMES, EMOTION_TO_ID, ID_TO_EMOTION, EmotionLabel

__all__ = [
    "EMOTION_NAMES",
    "EMOTION_TO_ID",
    "ID_TO_EMOTION",
    "EmotionLabel",
    "errors",
    "__version__",
]
