"""The pipe-delimited corpus metadata format.

One utterance per line, five fields:
``file_id|speaker_id|{PH1 PH2 ...}|raw text|emotion``
"""

from dataclasses import dataclass
from pathlib import Path

from ..emotions import EMOTION_TO_ID
from ..errors import FormatError
from ..textfront.phonemes import is_valid_symbol

_FIELD_NAMES = ("file id", "speaker id", "phoneme sequence", "text", "emotion")


@dataclass(frozen=True)
class MetadataRecord:
    file_id: str
    speaker_id: str
    phonemes: tuple
    text: str
    emotion: str

    def __post_init__(self):
        for index, value in enumerate(
            (self.file_id, self.speaker_id, " ".join(self.phonemes), self.text, self.emotion),
            start=1,
        ):
            if "|" in value:
                raise FormatError(f"{_FIELD_NAMES[index-1]} contains a pipe", field=index)
        if self.emotion not in EMOTION_TO_ID:
            raise FormatError(
                f"unknown emotion {self.emotion!r}; valid: {', '.join(EMOTION_TO_ID)}",
                field=5,
            )


def parse_metadata_line(line: str) -> MetadataRecord:
    """Parse one metadata line; FormatError names the offending field."""
    line = line.rstrip("\n")
    fields = line.split("|")
    if len(fields) != 5:
        raise FormatError(
            f"expected 5 pipe-separated fields, got {len(fields)}",
            field=min(len(fields) + 1, 5),
        )
    file_id, speaker, phonemes_raw, text, emotion = fields
    if not (phonemes_raw.startswith("{") and phonemes_raw.endswith("}")):
        raise FormatError("phoneme sequence must be wrapped in braces", field=3)
    symbols = tuple(phonemes_raw[1:-1].split())
    bad = [s for s in symbols if not is_valid_symbol(s)]
    if bad:
        raise FormatError(f"invalid phoneme symbols {bad}", field=3)
    return MetadataRecord(file_id, speaker, symbols, text, emotion)


def serialize_metadata(record: MetadataRecord) -> str:
    return "|".join(
        (
            record.file_id,
            record.speaker_id,
            "{" + " ".join(record.phonemes) + "}",
            record.text,
            record.emotion,
        )
    )


def read_metadata_file(path) -> list:
    """All records of a metadata file, skipping blank lines."""
    records = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            records.append(parse_metadata_line(line))
        except FormatError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}", field=exc.field) from exc
    return records


def write_metadata_file(records, path) -> None:
    Path(path).write_text(
        "".join(serialize_metadata(r) + "\n" for r in records), encoding="utf-8"
    )
