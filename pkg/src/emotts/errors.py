"""Exception hierarchy shared by all emotts modules."""


class EmottsError(Exception):
    """Base class for every error raised by this package."""


class ParseError(EmottsError):
    """Malformed TextGrid input; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(EmottsError):
    """Malformed metadata record; carries the 1-based field index."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"field {field}: {message}"
        super().__init__(message)


class LexiconMissing(EmottsError):
    """Pronunciation lexicon file absent or unparseable."""


class AudioError(EmottsError):
    """Invalid audio input (empty waveform, bad sample data)."""


class MissingAsset(EmottsError):
    """Corpus records whose audio or TextGrid file is missing."""

    def __init__(self, file_ids):
        self.file_ids = list(file_ids)
        super().__init__("missing assets for: " + ", ".join(self.file_ids))


class AlignmentMismatch(EmottsError):
    """Forced-alignment durations irreconcilable with extracted features."""


class DataError(EmottsError):
    """Invalid training data (bad labels, empty dataset)."""


class ModelNotLoaded(EmottsError):
    """An operation needing a loaded model was called without one."""


class ShapeError(EmottsError):
    """Tensor shape mismatch between predictions and targets."""


class NonFiniteLoss(EmottsError):
    """Training loss became NaN/Inf; training aborts with a diagnostic dump."""


class WeightMismatch(EmottsError):
    """Checkpoint tensor incompatible with the configured architecture."""

    def __init__(self, layer, expected, got):
        self.layer = layer
        super().__init__(f"weight mismatch at '{layer}': expected {expected}, got {got}")


class IoError(EmottsError):
    """File I/O failure (unreadable WAV, refused zero-length write)."""


class RateMismatch(EmottsError):
    """Two waveforms with different sample rates where one is required."""


class UnknownSpeaker(EmottsError):
    """Speaker id not present in the speaker table."""


class EmptyTextError(EmottsError):
    """Input text normalizes to nothing; synthesis refuses to emit audio."""
