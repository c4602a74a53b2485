"""Toolkit for QED-style question answering explanations."""

from .model import (
    AnswerAnnotation,
    DEFAULT_PREPOSITIONS,
    Explanation,
    ExplanationLabel,
    ExplicitMention,
    ImplicitPhraseMention,
    ImplicitSentenceMention,
    PassageMention,
    QedExample,
    ReferentialEquality,
    SentenceSpan,
    TextSpan,
    TitleMention,
    ValidationReport,
    Violation,
    resolve_answer,
    validate_example,
)
from .pattern import EntailmentPattern, extract_pattern
from .text import normalize_text

__version__ = "0.1.0"

__all__ = [
    "AnswerAnnotation",
    "DEFAULT_PREPOSITIONS",
    "EntailmentPattern",
    "Explanation",
    "ExplanationLabel",
    "ExplicitMention",
    "ImplicitPhraseMention",
    "ImplicitSentenceMention",
    "PassageMention",
    "QedExample",
    "ReferentialEquality",
    "SentenceSpan",
    "TextSpan",
    "TitleMention",
    "ValidationReport",
    "Violation",
    "extract_pattern",
    "normalize_text",
    "resolve_answer",
    "validate_example",
    "__version__",
]
