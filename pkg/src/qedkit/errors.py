"""Exception types shared across the toolkit.

Every exception carries a stable ``code`` string so CLI and HTTP layers can
report machine-readable errors without string matching.
"""

from __future__ import annotations


class QedError(Exception):
    """Base class for all toolkit errors."""

    code = "ERROR"


class NotExplainedError(QedError):
    """Operation requires a valid explanation but the example has none."""

    code = "NOT_EXPLAINED"


class OverlappingSpansError(QedError):
    """Equality or answer spans overlap within one host string."""

    code = "OVERLAPPING_SPANS"


class NoSentenceError(QedError):
    """An answer span does not fall inside a single sentence."""

    code = "NO_SENTENCE"


class UnknownIdError(QedError):
    """A prediction references an id absent from the gold corpus."""

    code = "UNKNOWN_ID"


class DuplicateIdError(QedError):
    code = "DUPLICATE_ID"


class IdMismatchError(QedError):
    """Two corpora that must share an id set do not."""

    code = "ID_MISMATCH"


class DuplicateJudgmentError(QedError):
    code = "DUPLICATE_JUDGMENT"


class InconsistentGoldError(QedError):
    """The same instance id carries conflicting gold correctness."""

    code = "INCONSISTENT_GOLD"


class CorpusIOError(QedError):
    code = "IO_ERROR"


class CorpusEncodingError(QedError):
    code = "ENCODING_ERROR"


class InvalidCorpusError(QedError):
    """Serialization was asked to emit an example that fails validation."""

    code = "INVALID_CORPUS"
