"""Text normalization: ASCII transliteration, lowercasing, abbreviation and
numeral expansion, whitespace collapse.

The result contains only lowercase ASCII words (apostrophes kept inside
words), no digits and no repeated spaces, so it can feed the G2P stage
directly.
"""

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

# Typography that NFKD alone does not fold to something useful.
_CHAR_FOLD = {
    "‘": "'", "’": "'", "‚": "'",
    "“": '"', "”": '"', "„": '"',
    "–": "-", "—": "-", "−": "-",
    "…": "...",
    "ß": "ss",
    "æ": "ae", "Æ": "ae",
    "œ": "oe", "Œ": "oe",
}

_ONES = (
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
)
_TENS = (
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
)

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_APOSTROPHE_WORD_RE = re.compile(r"[^a-z' ]")
_SPACE_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizedText:
    """Lowercase ASCII text with expanded abbreviations and numerals."""

    text: str

    def __post_init__(self):
        t = self.text
        if t != t.lower() or t != t.strip() or "  " in t:
            raise ValueError(f"not normalized: {t!r}")
        if any(ord(c) > 127 for c in t) or any(c.isdigit() for c in t):
            raise ValueError(f"not normalized: {t!r}")

    def words(self) -> list:
        return self.text.split() if self.text else []


def default_abbreviations_path() -> Path:
    return Path(resources.files("emotts") / "data" / "abbreviations.tsv")


def load_abbreviations(path=None) -> dict:
    """Two-column UTF-8 TSV: abbreviation (with trailing period) -> expansion."""
    path = Path(path) if path is not None else default_abbreviations_path()
    table = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        abbr, expansion = line.split("\t")
        table[abbr.lower()] = expansion.lower()
    return table


_DEFAULT_ABBREVIATIONS = None


def _abbreviations() -> dict:
    global _DEFAULT_ABBREVIATIONS
    if _DEFAULT_ABBREVIATIONS is None:
        _DEFAULT_ABBREVIATIONS = load_abbreviations()
    return _DEFAULT_ABBREVIATIONS


def number_to_words(token: str) -> str:
    """Spell out an integer or simple decimal numeral.

    Integers 0..999999 become number words; anything larger is spelled
    digit by digit. Decimals read the fraction digit by digit after "point".
    """
    if "." in token:
        whole, frac = token.split(".", 1)
        frac_words = " ".join(_ONES[int(d)] for d in frac)
        return f"{number_to_words(whole)} point {frac_words}"
    value = int(token)
    if value > 999_999:
        return " ".join(_ONES[int(d)] for d in token)
    return _integer_words(value)


def _integer_words(value: int) -> str:
    if value < 20:
        return _ONES[value]
    if value < 100:
        tens, rest = divmod(value, 10)
        return _TENS[tens] + (f" {_ONES[rest]}" if rest else "")
    if value < 1000:
        hundreds, rest = divmod(value, 100)
        words = f"{_ONES[hundreds]} hundred"
        return words + (f" {_integer_words(rest)}" if rest else "")
    thousands, rest = divmod(value, 1000)
    words = f"{_integer_words(thousands)} thousand"
    return words + (f" {_integer_words(rest)}" if rest else "")


def _to_ascii(text: str) -> str:
    for src, dst in _CHAR_FOLD.items():
        text = text.replace(src, dst)
    decomposed = unicodedata.normalize("NFKD", text)
    return decomposed.encode("ascii", "ignore").decode("ascii")


def _expand_abbreviations(text: str, table: dict) -> str:
    def replace(match):
        return table[match.group(0)]

    # Longest first so "mrs." is not shadowed by a shorter key.
    keys = sorted(table, key=len, reverse=True)
    pattern = "|".join(re.escape(k) for k in keys)
    return re.sub(rf"(?<![a-z])(?:{pattern})(?![a-z])", replace, text)


def normalize_text(raw: str, abbreviations=None) -> NormalizedText:
    """Normalize arbitrary text into the lowercase ASCII frontend form.

    Degenerate input (empty, punctuation-only) yields an empty result
    rather than an error.
    """
    table = abbreviations if abbreviations is not None else _abbreviations()
    text = _to_ascii(raw).lower()
    text = _expand_abbreviations(text, table)
    text = _NUMBER_RE.sub(lambda m: number_to_words(m.group(0)), text)
    text = _APOSTROPHE_WORD_RE.sub(" ", text)
    # Apostrophes survive only between letters ("don't"); bare ones go away.
    text = re.sub(r"(?<![a-z])'|'(?![a-z])", " ", text)
    text = _SPACE_RE.sub(" ", text).strip()
    return NormalizedText(text)
