"""Exception hierarchy for the package."""


class SketchSearchError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SketchSearchError):
    """Caller-supplied value violates a precondition (empty sketch, bad spacing, ...)."""


class InvalidStateError(SketchSearchError):
    """Operation not valid in the current canvas/session state."""


class EmptyQueryError(SketchSearchError):
    """A search query was built from a canvas with no committed elements."""


class ModelFormatError(SketchSearchError):
    """Weights container is malformed or shape-incompatible."""


class CorpusError(SketchSearchError):
    """Corpus directory unreadable or contains no valid screens."""


class IndexFormatError(SketchSearchError):
    """Index file is malformed or truncated."""


class VersionMismatchError(IndexFormatError):
    """Index file carries a different format version than this reader."""

    def __init__(self, found: str, expected: str):
        super().__init__(f"index version {found!r} not readable by {expected!r} reader")
        self.found = found
        self.expected = expected
