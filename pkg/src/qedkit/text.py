"""Text normalization and tokenization helpers."""

from __future__ import annotations

import re
import unicodedata

# Word-like tokens: runs of letters/digits, allowing internal apostrophes,
# commas, periods and hyphens so "107,601" and "Howl's" stay single tokens.
_WORD_RE = re.compile(r"\w+(?:['’.,\-]\w+)*")


def normalize_text(s: str) -> str:
    """Canonical comparison form: NFC, lower-case, collapsed whitespace.

    Idempotent: ``normalize_text(normalize_text(s)) == normalize_text(s)``.
    """
    s = unicodedata.normalize("NFC", s)
    s = unicodedata.normalize("NFC", s.lower())
    return " ".join(s.split())


def word_spans(s: str) -> list[tuple[int, int]]:
    """Character offsets of word-like tokens in ``s``."""
    return [(m.start(), m.end()) for m in _WORD_RE.finditer(s)]
