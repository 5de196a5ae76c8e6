"""From-scratch transformer text emotion classifier.

A small encoder pools the classification-start token's final hidden state
and maps it through a LayerNorm/dense head to 5 emotion logits. A pluggable
pretrained backend can stand in via the TextClassifierBackend protocol.
"""

from dataclasses import dataclass, asdict, field
from typing import Protocol

import numpy as np
import torch
import torch.nn as nn

from ..checkpoint import load_checkpoint, save_checkpoint, state_dict_to_arrays, load_state_into
from ..emotions import N_EMOTIONS, EmotionLabel
from ..layers import MultiHeadSelfAttention
from ..textfront.tokenizer import SEQ_LEN, TokenSequence, TokenVocabulary, tokenize_for_classifier


@dataclass(frozen=True)
class ClassifierConfig:
    vocab_size: int
    n_layers: int = 2
    n_heads: int = 2
    hidden: int = 64
    ffn: int = 128
    dropout: float = 0.1
    seq_len: int = SEQ_LEN
    n_labels: int = N_EMOTIONS

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierConfig":
        return cls(**d)


@dataclass(frozen=True)
class ClassifierOutput:
    probs: np.ndarray
    predicted: EmotionLabel
    pooled: np.ndarray


class EncoderLayer(nn.Module):
    """Self-attention + position-wise dense feed-forward, post layer norm."""

    def __init__(self, hidden, n_heads, ffn, dropout):
        super().__init__()
        self.attention = MultiHeadSelfAttention(hidden, n_heads, dropout)
        self.attention_norm = nn.LayerNorm(hidden)
        self.feed_forward = nn.Sequential(
            nn.Linear(hidden, ffn), nn.ReLU(), nn.Linear(ffn, hidden)
        )
        self.feed_forward_norm = nn.LayerNorm(hidden)
        self.dropout = nn.Dropout(dropout)

    def forward(self, x, pad_mask):
        x = self.attention_norm(x + self.dropout(self.attention(x, pad_mask)))
        return self.feed_forward_norm(x + self.dropout(self.feed_forward(x)))


class EmotionClassifier(nn.Module):
    """Token + learned position embeddings, encoder stack, 5-way head."""

    def __init__(self, config: ClassifierConfig):
        super().__init__()
        self.config = config
        self.token_emb = nn.Embedding(config.vocab_size, config.hidden, padding_idx=0)
        self.pos_emb = nn.Embedding(config.seq_len, config.hidden)
        self.layers = nn.ModuleList(
            EncoderLayer(config.hidden, config.n_heads, config.ffn, config.dropout)
            for _ in range(config.n_layers)
        )
        self.head_norm = nn.LayerNorm(config.hidden)
        self.head_dense = nn.Linear(config.hidden, config.hidden)
        self.head_dropout = nn.Dropout(config.dropout)
        self.head_out = nn.Linear(config.hidden, config.n_labels)

    def forward(self, ids: torch.Tensor, attention_mask: torch.Tensor):
        """ids/attention_mask: [B, seq_len]; returns (logits, pooled)."""
        positions = torch.arange(ids.shape[1], device=ids.device)
        x = self.token_emb(ids) + self.pos_emb(positions)[None, :, :]
        pad_mask = attention_mask == 0
        for layer in self.layers:
            x = layer(x, pad_mask)
        pooled = x[:, 0, :]
        hidden = self.head_dropout(torch.tanh(self.head_dense(self.head_norm(pooled))))
        return self.head_out(hidden), pooled


def classify(tokens: TokenSequence, model: EmotionClassifier) -> ClassifierOutput:
    """Deterministic eval-mode classification of one token sequence."""
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            ids = torch.tensor([tokens.ids], dtype=torch.long)
            mask = torch.tensor([tokens.attention_mask], dtype=torch.long)
            logits, pooled = model(ids, mask)
            probs = torch.softmax(logits[0], dim=-1).cpu().numpy()
    finally:
        model.train(was_training)
    predicted = EmotionLabel.from_id(int(np.argmax(probs)))
    return ClassifierOutput(probs, predicted, pooled[0].cpu().numpy())


@dataclass
class ClassifierBundle:
    """Model plus the tokenizer vocabulary it was trained with."""

    model: EmotionClassifier
    vocab: TokenVocabulary
    history: list = field(default_factory=list)

    def classify_text(self, text: str) -> ClassifierOutput:
        return classify(tokenize_for_classifier(text, self.vocab), self.model)

    def predict_emotion_id(self, text: str) -> int:
        return self.classify_text(text).predicted.id

    def save(self, path) -> None:
        config = {
            "model": self.model.config.to_dict(),
            "vocab": self.vocab.tokens(),
            "history": self.history,
        }
        save_checkpoint(path, "classifier", config, state_dict_to_arrays(self.model.state_dict()))

    @classmethod
    def load(cls, path) -> "ClassifierBundle":
        kind, config, tensors = load_checkpoint(path)
        if kind != "classifier":
            raise ValueError(f"{path} is a {kind!r} checkpoint, expected classifier")
        model = EmotionClassifier(ClassifierConfig.from_dict(config["model"]))
        load_state_into(model, tensors)
        model.eval()
        vocab = TokenVocabulary(config["vocab"][4:])
        return cls(model, vocab, config.get("history", []))


class TextClassifierBackend(Protocol):
    """Adapter interface for pretrained classifier backends."""

    def __call__(self, text: str) -> tuple:
        """Return (probs over the 5 emotions, pooled representation)."""
        ...
