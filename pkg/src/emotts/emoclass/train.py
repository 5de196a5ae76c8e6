"""Classifier training: cross-entropy with Adam, per-epoch loss/macro-F1."""

import numpy as np
import torch
import torch.nn.functional as F

from ..emotions import EMOTION_TO_ID, N_EMOTIONS
from ..errors import DataError
from ..textfront.tokenizer import TokenVocabulary, tokenize_for_classifier
from .model import ClassifierBundle, ClassifierConfig, EmotionClassifier


def macro_f1(true_ids, predicted_ids, n_labels: int = N_EMOTIONS) -> float:
    """Unweighted mean per-class F1; absent classes contribute 0."""
    true_ids = np.asarray(true_ids)
    predicted_ids = np.asarray(predicted_ids)
    scores = []
    for label in range(n_labels):
        tp = int(np.sum((predicted_ids == label) & (true_ids == label)))
        fp = int(np.sum((predicted_ids == label) & (true_ids != label)))
        fn = int(np.sum((predicted_ids != label) & (true_ids == label)))
        if tp == fp == fn == 0:
            continue
        scores.append(2 * tp / (2 * tp + fp + fn) if tp else 0.0)
    return float(np.mean(scores)) if scores else 0.0


def _resolve_label(label) -> int:
    if isinstance(label, str):
        if label not in EMOTION_TO_ID:
            raise DataError(f"unknown emotion label {label!r}")
        return EMOTION_TO_ID[label]
    label = int(label)
    if not 0 <= label < N_EMOTIONS:
        raise DataError(f"emotion id out of range 0-{N_EMOTIONS - 1}: {label}")
    return label


def train_classifier(
    dataset,
    epochs: int = 50,
    batch_size: int = 32,
    lr: float = 1e-3,
    seed: int = 0,
    config: ClassifierConfig = None,
    vocab: TokenVocabulary = None,
) -> ClassifierBundle:
    """Train on (text, emotion label) pairs; deterministic under the seed.

    Returns a bundle whose ``history`` holds per-epoch
    {"epoch", "loss", "macro_f1"} entries.
    """
    if not dataset:
        raise DataError("empty training dataset")
    texts = [t for t, _ in dataset]
    labels = [_resolve_label(l) for _, l in dataset]
    if len(set(labels)) < 2:
        raise DataError("training needs at least 2 distinct classes")

    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)

    if vocab is None:
        vocab = TokenVocabulary.from_texts(texts)
    if config is None:
        config = ClassifierConfig(vocab_size=len(vocab))
    model = EmotionClassifier(config)

    encoded = [tokenize_for_classifier(t, vocab) for t in texts]
    ids = torch.tensor([e.ids for e in encoded], dtype=torch.long)
    masks = torch.tensor([e.attention_mask for e in encoded], dtype=torch.long)
    targets = torch.tensor(labels, dtype=torch.long)

    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    history = []
    n = len(dataset)
    for epoch in range(1, epochs + 1):
        model.train()
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, batch_size):
            batch = torch.from_numpy(order[start : start + batch_size])
            logits, _ = model(ids[batch], masks[batch])
            loss = F.cross_entropy(logits, targets[batch])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.item()) * len(batch)
        model.eval()
        with torch.no_grad():
            logits, _ = model(ids, masks)
            predictions = logits.argmax(dim=-1).cpu().numpy()
        history.append(
            {
                "epoch": epoch,
                "loss": epoch_loss / n,
                "macro_f1": macro_f1(targets.numpy(), predictions),
            }
        )
    model.eval()
    return ClassifierBundle(model, vocab, history)
