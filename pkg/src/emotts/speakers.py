"""Speaker table helpers: name -> embedding id, persisted as speakers.json."""

import json
from pathlib import Path

# Genders of the four reference corpus speakers; anything else is unknown.
KNOWN_SPEAKER_GENDERS = {
    "bea": "female",
    "jenie": "female",
    "josh": "male",
    "sam": "male",
}


def speaker_gender(name: str) -> str:
    return KNOWN_SPEAKER_GENDERS.get(name, "unknown")


def speaker_table(names) -> dict:
    """Stable name -> id mapping (sorted names, ids 0..n-1)."""
    return {name: i for i, name in enumerate(sorted(set(names)))}


def write_speakers_json(table: dict, path) -> None:
    Path(path).write_text(json.dumps(table, indent=2) + "\n", encoding="utf-8")


def read_speakers_json(path) -> dict:
    table = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(table, dict) or not all(
        isinstance(v, int) for v in table.values()
    ):
        raise ValueError(f"speakers table at {path} must map name -> integer id")
    return table
