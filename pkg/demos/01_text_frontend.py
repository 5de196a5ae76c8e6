"""Text frontend walkthrough: normalization, G2P, classifier tokens."""

from emotts.textfront import (
    PronunciationLexicon,
    TokenVocabulary,
    g2p,
    normalize_text,
    phonemes_to_ids,
    tokenize_for_classifier,
)

print("== normalization ==")
for raw in ("Dr. Smith", "2 cats", "  Hello   WORLD  ", "Mrs. Lee reads 3.5 books!"):
    print(f"{raw!r:40} -> {normalize_text(raw).text!r}")

print("\n== grapheme-to-phoneme ==")
lexicon = PronunciationLexicon.load()
print(f"lexicon entries: {len(lexicon)}")
for text in ("author", "Keep an eye on him.", "zorblat day"):
    seq = g2p(normalize_text(text), lexicon)
    print(f"{text!r:24} -> {' '.join(seq.phonemes)}")
    if seq.oov_words:
        print(f"{'':24}    (spelled out: {', '.join(seq.oov_words)})")

seq = g2p(normalize_text("keep an eye on him"), lexicon)
print(f"\nphoneme ids: {phonemes_to_ids(seq.phonemes)}")

print("\n== classifier token sequences ==")
vocab = TokenVocabulary.from_texts(["i am happy today", "what a gross day"])
tokens = tokenize_for_classifier("I am happy", vocab)
print(f"ids[:8]      = {tokens.ids[:8]}")
print(f"mask[:8]     = {tokens.attention_mask[:8]}")
print(f"length       = {len(tokens.ids)} (always 128), real tokens = {tokens.length}")
