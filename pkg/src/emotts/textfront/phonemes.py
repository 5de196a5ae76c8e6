"""ARPAbet phoneme vocabulary with stress digits, plus PAD/UNK/SIL specials."""

PAD = "PAD"
UNK = "UNK"
SIL = "SIL"

SPECIALS = (PAD, UNK, SIL)

# 15 stressable vowels and 24 consonants of the CMU dictionary set.
VOWELS = (
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
    "EY", "IH", "IY", "OW", "OY", "UH", "UW",
)
CONSONANTS = (
    "B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N",
    "NG", "P", "R", "S", "SH", "T", "TH", "V", "W", "Y", "Z", "ZH",
)

PHONEME_SYMBOLS = (
    SPECIALS
    + tuple(f"{v}{stress}" for v in VOWELS for stress in "012")
    + CONSONANTS
)

SYMBOL_TO_ID = {symbol: i for i, symbol in enumerate(PHONEME_SYMBOLS)}
ID_TO_SYMBOL = {i: symbol for symbol, i in SYMBOL_TO_ID.items()}

PAD_ID = SYMBOL_TO_ID[PAD]
UNK_ID = SYMBOL_TO_ID[UNK]
SIL_ID = SYMBOL_TO_ID[SIL]

VOCAB_SIZE = len(PHONEME_SYMBOLS)


def is_valid_symbol(symbol: str) -> bool:
    return symbol in SYMBOL_TO_ID


def phonemes_to_ids(symbols) -> list:
    """Map symbols to integer ids; unknown symbols map to UNK."""
    return [SYMBOL_TO_ID.get(s, UNK_ID) for s in symbols]


def ids_to_phonemes(ids) -> list:
    return [ID_TO_SYMBOL[int(i)] for i in ids]
