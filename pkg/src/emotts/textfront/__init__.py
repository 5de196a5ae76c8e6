"""Text frontend: normalization, grapheme-to-phoneme conversion, and
classifier token sequences.

All operations are pure functions over immutable lexicon/vocabulary
objects and are safe for concurrent callers.
"""

from .normalize import (
    NormalizedText,
    load_abbreviations,
    normalize_text,
    number_to_words,
)
from .g2p import PhonemeSequence, PronunciationLexicon, g2p, spell_out
from .phonemes import (
    PAD_ID,
    PHONEME_SYMBOLS,
    SIL,
    SIL_ID,
    SYMBOL_TO_ID,
    ID_TO_SYMBOL,
    UNK_ID,
    VOCAB_SIZE,
    ids_to_phonemes,
    phonemes_to_ids,
)
from .tokenizer import (
    SEQ_LEN,
    TokenSequence,
    TokenVocabulary,
    split_tokens,
    tokenize_for_classifier,
)

__all__ = [
    "NormalizedText",
    "PhonemeSequence",
    "PronunciationLexicon",
    "TokenSequence",
    "TokenVocabulary",
    "SEQ_LEN",
    "PAD_ID",
    "PHONEME_SYMBOLS",
    "SIL",
    "SIL_ID",
    "SYMBOL_TO_ID",
    "ID_TO_SYMBOL",
    "UNK_ID",
    "VOCAB_SIZE",
    "g2p",
    "ids_to_phonemes",
    "load_abbreviations",
    "normalize_text",
    "number_to_words",
    "phonemes_to_ids",
    "spell_out",
    "split_tokens",
    "tokenize_for_classifier",
]
