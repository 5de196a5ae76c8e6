"""Grapheme-to-phoneme conversion backed by a CMU-format pronunciation lexicon.

Out-of-vocabulary words fall back to letter-name pronunciations and are
flagged in the result, keeping the conversion deterministic end to end.
"""

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import LexiconMissing
from .normalize import NormalizedText
from .phonemes import SYMBOL_TO_ID, is_valid_symbol

_ENTRY_RE = re.compile(r"^(\S+?)(?:\((\d+)\))?\s+(.+)$")

# Letter-name pronunciations for spelling out OOV words.
LETTER_PHONEMES = {
    "a": ["EY1"], "b": ["B", "IY1"], "c": ["S", "IY1"], "d": ["D", "IY1"],
    "e": ["IY1"], "f": ["EH1", "F"], "g": ["JH", "IY1"], "h": ["EY1", "CH"],
    "i": ["AY1"], "j": ["JH", "EY1"], "k": ["K", "EY1"], "l": ["EH1", "L"],
    "m": ["EH1", "M"], "n": ["EH1", "N"], "o": ["OW1"], "p": ["P", "IY1"],
    "q": ["K", "Y", "UW1"], "r": ["AA1", "R"], "s": ["EH1", "S"],
    "t": ["T", "IY1"], "u": ["Y", "UW1"], "v": ["V", "IY1"],
    "w": ["D", "AH1", "B", "AH0", "L", "Y", "UW0"], "x": ["EH1", "K", "S"],
    "y": ["W", "AY1"], "z": ["Z", "IY1"],
}


@dataclass(frozen=True)
class PhonemeSequence:
    """ARPAbet symbols for a normalized text, with OOV words flagged."""

    phonemes: tuple
    source_text: str
    oov_words: tuple = field(default=())

    def __post_init__(self):
        bad = [p for p in self.phonemes if not is_valid_symbol(p)]
        if bad:
            raise ValueError(f"symbols outside the phoneme vocabulary: {bad}")

    def ids(self) -> list:
        return [SYMBOL_TO_ID[p] for p in self.phonemes]

    def __len__(self):
        return len(self.phonemes)


class PronunciationLexicon:
    """Word -> ARPAbet pronunciations, first entry wins for homographs."""

    def __init__(self, entries: dict):
        self._entries = entries

    def __len__(self):
        return len(self._entries)

    def __contains__(self, word):
        return word.lower() in self._entries

    def lookup(self, word: str):
        prons = self._entries.get(word.lower())
        return prons[0] if prons else None

    def pronunciations(self, word: str) -> list:
        return list(self._entries.get(word.lower(), []))

    @classmethod
    def load(cls, path=None) -> "PronunciationLexicon":
        """Parse a CMU-dictionary-format file: ``WORD  PH1 PH2 ...`` per line.

        Alternate pronunciations use the ``WORD(2)`` convention; ``;;;``
        comment lines are skipped.
        """
        path = Path(path) if path is not None else default_lexicon_path()
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise LexiconMissing(f"cannot read lexicon {path}: {exc}") from exc
        entries: dict = {}
        for lineno, line in enumerate(raw.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith(";;;"):
                continue
            match = _ENTRY_RE.match(line)
            if not match:
                raise LexiconMissing(f"unparseable lexicon line {lineno}: {line!r}")
            word, _, phones = match.groups()
            symbols = phones.split()
            if not all(is_valid_symbol(s) for s in symbols):
                raise LexiconMissing(
                    f"invalid phoneme in lexicon line {lineno}: {line!r}"
                )
            entries.setdefault(word.lower(), []).append(symbols)
        return cls(entries)


def default_lexicon_path() -> Path:
    return Path(resources.files("emotts") / "data" / "lexicon.dict")


def spell_out(word: str) -> list:
    """Per-letter pronunciation for a word absent from the lexicon."""
    phones = []
    for char in word:
        phones.extend(LETTER_PHONEMES.get(char, []))
    return phones


def g2p(norm: NormalizedText, lexicon: PronunciationLexicon) -> PhonemeSequence:
    """Concatenate per-word pronunciations; OOV words are spelled out."""
    phonemes = []
    oov = []
    for word in norm.words():
        pron = lexicon.lookup(word)
        if pron is None:
            pron = spell_out(word)
            oov.append(word)
        phonemes.extend(pron)
    return PhonemeSequence(tuple(phonemes), norm.text, tuple(oov))
