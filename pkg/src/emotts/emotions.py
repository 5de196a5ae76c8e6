"""The fixed five-emotion label set and its id table.

The mapping is frozen: every checkpoint, metadata file and service response
uses these exact ids, persisted alongside checkpoints as ``emotions.json``.
"""

import json
from dataclasses import dataclass
from pathlib import Path

EMOTION_TO_ID = {
    "amused": 0,
    "anger": 1,
    "disgust": 2,
    "neutral": 3,
    "sleepiness": 4,
}

ID_TO_EMOTION = {i: name for name, i in EMOTION_TO_ID.items()}

EMOTION_NAMES = tuple(EMOTION_TO_ID)

N_EMOTIONS = len(EMOTION_TO_ID)


@dataclass(frozen=True)
class EmotionLabel:
    name: str
    id: int

    def __post_init__(self):
        if EMOTION_TO_ID.get(self.name) != self.id:
            raise ValueError(f"not a valid emotion label: {self.name}={self.id}")

    @classmethod
    def from_name(cls, name: str) -> "EmotionLabel":
        if name not in EMOTION_TO_ID:
            raise ValueError(
                f"unknown emotion {name!r}; valid names: {', '.join(EMOTION_NAMES)}"
            )
        return cls(name, EMOTION_TO_ID[name])

    @classmethod
    def from_id(cls, emotion_id: int) -> "EmotionLabel":
        if emotion_id not in ID_TO_EMOTION:
            raise ValueError(f"emotion id out of range 0-{N_EMOTIONS - 1}: {emotion_id}")
        return cls(ID_TO_EMOTION[emotion_id], emotion_id)


def write_emotions_json(path) -> None:
    Path(path).write_text(json.dumps(EMOTION_TO_ID, indent=2) + "\n", encoding="utf-8")


def read_emotions_json(path) -> dict:
    table = json.loads(Path(path).read_text(encoding="utf-8"))
    if table != EMOTION_TO_ID:
        raise ValueError(f"emotions table at {path} does not match the fixed mapping")
    return table
