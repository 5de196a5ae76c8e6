"""Emotion classifier walkthrough: train a small transformer on a synthetic
keyword-separable set, inspect probabilities, save/load a checkpoint."""

from pathlib import Path

import numpy as np

from emotts.emoclass import ClassifierBundle, train_classifier

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

keywords = {
    "amused": "hilarious",
    "anger": "furious",
    "disgust": "revolting",
    "neutral": "ordinary",
    "sleepiness": "drowsy",
}
filler = "the a of to and it was on in at".split()
rng = np.random.default_rng(0)

dataset = []
for label, keyword in keywords.items():
    for _ in range(40):
        words = list(rng.choice(filler, size=6)) + [keyword]
        rng.shuffle(words)
        dataset.append((" ".join(words), label))
print(f"training on {len(dataset)} synthetic sentences, 5 classes")

bundle = train_classifier(dataset, epochs=8, seed=0)
for entry in bundle.history:
    print(f"  epoch {entry['epoch']:2d}  loss {entry['loss']:.4f}  "
          f"macro-F1 {entry['macro_f1']:.3f}")

print("\n== predictions ==")
for text in ("what a hilarious day", "so furious", "an ordinary morning"):
    output = bundle.classify_text(text)
    ranked = ", ".join(f"{p:.2f}" for p in output.probs)
    print(f"{text!r:28} -> {output.predicted.name:11} [{ranked}]")

ckpt = out / "classifier.ckpt"
bundle.save(ckpt)
restored = ClassifierBundle.load(ckpt)
assert restored.predict_emotion_id("drowsy words") == bundle.predict_emotion_id("drowsy words")
print(f"\ncheckpoint round-trip OK: {ckpt}")
