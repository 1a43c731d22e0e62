"""Exception types raised across the package."""


class PhonembedError(Exception):
    """Base class for all package errors."""


class DuplicateSegment(PhonembedError):
    pass


class MalformedRow(PhonembedError):
    pass


class BadFeatureValue(PhonembedError):
    pass


class UnknownSegment(PhonembedError):
    def __init__(self, text: str, offset: int):
        self.text = text
        self.offset = offset
        super().__init__(f"no table segment matches {text!r} at offset {offset}")


class EmptyLexicon(PhonembedError):
    pass


class EmptyWord(PhonembedError):
    pass


class InsufficientData(PhonembedError):
    pass


class ShapeError(PhonembedError):
    pass


class EmptyBatch(PhonembedError):
    pass


class DegenerateLabels(PhonembedError):
    pass


class DegenerateSeries(PhonembedError):
    pass


class MissingWord(PhonembedError):
    def __init__(self, words):
        self.words = list(words)
        super().__init__(f"words not in lexicon: {', '.join(self.words)}")


class NoPerturbations(PhonembedError):
    pass


class ClosedEmbedder(PhonembedError):
    pass


class NoStressInfo(PhonembedError):
    pass


class EmptyDataset(PhonembedError):
    pass


class ArityError(PhonembedError):
    pass


class FormatError(PhonembedError):
    pass


class EmptyEmbedding(FormatError):
    pass


class ConfigError(PhonembedError):
    pass
