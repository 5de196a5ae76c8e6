"""Whitespace+punctuation tokenizer and fixed-length sequences for the
text emotion classifier.

Every sequence is exactly ``SEQ_LEN`` ids: a classification-start marker,
the token ids (truncated if needed), an end marker, then padding. The mask
is 1 on real tokens and 0 on padding, always a prefix of ones.
"""

import re
from collections import Counter
from dataclasses import dataclass

SEQ_LEN = 128

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
CLS_TOKEN = "<cls>"
SEP_TOKEN = "<sep>"

_SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN)

_TOKEN_RE = re.compile(r"[a-z0-9']+|[^\sa-z0-9']")


def split_tokens(text: str) -> list:
    """Lowercase words and standalone punctuation marks, in order."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class TokenSequence:
    ids: tuple
    attention_mask: tuple

    def __post_init__(self):
        if len(self.ids) != SEQ_LEN or len(self.attention_mask) != SEQ_LEN:
            raise ValueError(f"token sequence must be exactly {SEQ_LEN} long")
        n = sum(self.attention_mask)
        if tuple(self.attention_mask) != (1,) * n + (0,) * (SEQ_LEN - n):
            raise ValueError("attention mask must be a prefix of ones")

    @property
    def length(self) -> int:
        return sum(self.attention_mask)


class TokenVocabulary:
    """Corpus-learned token vocabulary with fixed special ids 0..3."""

    def __init__(self, tokens):
        self._tokens = list(_SPECIAL_TOKENS) + [
            t for t in tokens if t not in _SPECIAL_TOKENS
        ]
        self._ids = {t: i for i, t in enumerate(self._tokens)}

    def __len__(self):
        return len(self._tokens)

    @property
    def pad_id(self):
        return self._ids[PAD_TOKEN]

    @property
    def unk_id(self):
        return self._ids[UNK_TOKEN]

    @property
    def cls_id(self):
        return self._ids[CLS_TOKEN]

    @property
    def sep_id(self):
        return self._ids[SEP_TOKEN]

    def token_id(self, token: str) -> int:
        return self._ids.get(token, self.unk_id)

    def tokens(self) -> list:
        return list(self._tokens)

    @classmethod
    def from_texts(cls, texts, max_size=None, min_freq=1) -> "TokenVocabulary":
        counts = Counter()
        for text in texts:
            counts.update(split_tokens(text))
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        kept = [t for t, c in ranked if c >= min_freq]
        if max_size is not None:
            kept = kept[: max(0, max_size - len(_SPECIAL_TOKENS))]
        return cls(kept)


def tokenize_for_classifier(text: str, vocab: TokenVocabulary) -> TokenSequence:
    """Encode text as [CLS] tokens [SEP] padded/truncated to SEQ_LEN."""
    body = [vocab.token_id(t) for t in split_tokens(text)][: SEQ_LEN - 2]
    ids = [vocab.cls_id] + body + [vocab.sep_id]
    mask = [1] * len(ids)
    ids += [vocab.pad_id] * (SEQ_LEN - len(ids))
    mask += [0] * (SEQ_LEN - len(mask))
    return TokenSequence(tuple(ids), tuple(mask))
