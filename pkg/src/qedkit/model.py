"""Domain model for QED-style explanations.

An explanation links a question to an answer through a selected passage
sentence, a list of referential equalities (question phrase = passage
mention), and one or more answer annotations. Passage mentions are either
explicit spans, implicit bridged mentions (phrase-anchored or
sentence-level, each carrying a preposition), or links to the page title.

All types are immutable values; every operation in this module is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Union

from .errors import NotExplainedError

#: Closed vocabulary for the preposition of implicit (bridged) mentions.
DEFAULT_PREPOSITIONS = frozenset(
    {"of", "in", "at", "on", "by", "for", "from", "to", "with", "during"}
)


@dataclass(frozen=True)
class TextSpan:
    """Half-open character span ``[start, end)`` with its cached surface text.

    Offsets are code-point indices into the host string (question, passage,
    or title). The cached text is redundant by construction and is verified
    against the host by the validator.
    """

    start: int
    end: int
    text: str

    @classmethod
    def from_host(cls, host: str, start: int, end: int) -> "TextSpan":
        return cls(start, end, host[max(start, 0) : max(end, 0)])

    @classmethod
    def of(cls, host: str, surface: str, occurrence: int = 0) -> "TextSpan":
        """Span of the n-th occurrence of ``surface`` in ``host``."""
        pos = -1
        for _ in range(occurrence + 1):
            pos = host.index(surface, pos + 1)
        return cls(pos, pos + len(surface), surface)

    @property
    def offsets(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class SentenceSpan:
    """The selected sentence; must coincide with a sentence-boundary entry."""

    span: TextSpan


@dataclass(frozen=True)
class ExplicitMention:
    """A plain span inside the selected sentence."""

    kind: ClassVar[str] = "explicit"
    span: TextSpan


@dataclass(frozen=True)
class ImplicitPhraseMention:
    """Implicit noun phrase modifying ``anchor`` through ``preposition``.

    Models bridging of the form "the winner [of X]": the anchor is the
    bridged phrase inside the selected sentence, the implicit argument is
    the question phrase it is equated with.
    """

    kind: ClassVar[str] = "implicit_phrase"
    anchor: TextSpan
    preposition: str


@dataclass(frozen=True)
class ImplicitSentenceMention:
    """Implicit noun phrase modifying the whole sentence through a preposition."""

    kind: ClassVar[str] = "implicit_sentence"
    preposition: str


@dataclass(frozen=True)
class TitleMention:
    """A span into the page title.

    A modeling convenience for predictions (implicit arguments frequently
    corefer with the title); flagged as a warning in gold corpora where the
    implicit variants are canonical.
    """

    kind: ClassVar[str] = "title"
    span: TextSpan


PassageMention = Union[
    ExplicitMention, ImplicitPhraseMention, ImplicitSentenceMention, TitleMention
]


@dataclass(frozen=True)
class ReferentialEquality:
    """A question phrase and a passage mention that refer to the same thing."""

    question_span: TextSpan
    passage_mention: PassageMention


@dataclass(frozen=True)
class AnswerAnnotation:
    """Answer span inside the selected sentence plus its resolved form.

    ``resolved_span`` points at the full phrase after coreference resolution
    ("She" -> "Simona Halep"); equal to ``answer_span`` when no resolution is
    needed.
    """

    answer_span: TextSpan
    resolved_span: TextSpan


@dataclass(frozen=True)
class Explanation:
    selected_sentence: SentenceSpan
    equalities: tuple[ReferentialEquality, ...]
    answers: tuple[AnswerAnnotation, ...]


class ExplanationLabel(Enum):
    """Category of an example: 1 valid explanation, 2 answer only, 3 no answer."""

    VALID_EXPLANATION = "valid_explanation"
    ANSWER_ONLY = "answer_only"
    NO_ANSWER = "no_answer"

    @property
    def category(self) -> int:
        return {"valid_explanation": 1, "answer_only": 2, "no_answer": 3}[self.value]


@dataclass(frozen=True)
class QedExample:
    """One question/passage instance.

    ``sentence_boundaries`` partition the passage into sentences (gaps
    between consecutive sentences may only contain whitespace).
    ``explanation`` is present iff ``label`` is VALID_EXPLANATION.
    ``answer_spans`` carries bare answer spans for ANSWER_ONLY examples,
    which have a correct answer but no single-sentence explanation.
    """

    id: str
    title: str
    question: str
    passage: str
    sentence_boundaries: tuple[TextSpan, ...]
    label: ExplanationLabel
    explanation: Explanation | None = None
    answer_spans: tuple[TextSpan, ...] | None = None
    url: str | None = None


# --------------------------------------------------------------------------
# Validation


ERROR = "error"
WARNING = "warning"

INVALID_SPAN = "INVALID_SPAN"
SPAN_OUT_OF_BOUNDS = "SPAN_OUT_OF_BOUNDS"
SPAN_TEXT_MISMATCH = "SPAN_TEXT_MISMATCH"
SPAN_OUT_OF_SENTENCE = "SPAN_OUT_OF_SENTENCE"
SENTENCE_NOT_ALIGNED = "SENTENCE_NOT_ALIGNED"
INVALID_SENTENCE_BOUNDARIES = "INVALID_SENTENCE_BOUNDARIES"
UNKNOWN_PREPOSITION = "UNKNOWN_PREPOSITION"
MISSING_EXPLANATION = "MISSING_EXPLANATION"
UNEXPECTED_EXPLANATION = "UNEXPECTED_EXPLANATION"
UNEXPECTED_ANSWERS = "UNEXPECTED_ANSWERS"
NO_ANSWERS = "NO_ANSWERS"
DUPLICATE_EQUALITY = "DUPLICATE_EQUALITY"
TITLE_LINK_IN_GOLD = "TITLE_LINK_IN_GOLD"
DUPLICATE_ID = "DUPLICATE_ID"


@dataclass(frozen=True)
class Violation:
    code: str
    field: str
    offset: int
    message: str
    severity: str = ERROR

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "field": self.field,
            "offset": self.offset,
            "message": self.message,
            "severity": self.severity,
        }


_INDEX_RE = re.compile(r"\[(\d+)\]")


def _field_sort_key(field: str) -> tuple:
    # "explanation.equalities[10].mention" must sort after "[2]"; split path
    # segments and compare indices numerically.
    parts: list[object] = []
    for seg in field.split("."):
        m = _INDEX_RE.search(seg)
        if m:
            parts.append(seg[: m.start()])
            parts.append(int(m.group(1)))
        else:
            parts.append(seg)
            parts.append(-1)
    return tuple(parts)


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == ERROR]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == WARNING]

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


class _Checker:
    def __init__(self) -> None:
        self.out: list[Violation] = []

    def add(self, code: str, field: str, offset: int, message: str, severity: str = ERROR) -> None:
        self.out.append(Violation(code, field, offset, message, severity))

    def span_ok(self, host: str, host_name: str, span: TextSpan, field: str) -> bool:
        """Structural span checks, most fundamental first; one violation max."""
        if span.start < 0 or span.start >= span.end:
            self.add(INVALID_SPAN, field, span.start, f"require 0 <= start < end, got [{span.start}, {span.end})")
            return False
        if span.end > len(host):
            self.add(SPAN_OUT_OF_BOUNDS, field, span.start, f"span [{span.start}, {span.end}) exceeds {host_name} length {len(host)}")
            return False
        if span.text != host[span.start : span.end]:
            self.add(SPAN_TEXT_MISMATCH, field, span.start, f"cached text {span.text!r} != {host_name}[{span.start}:{span.end}] {host[span.start:span.end]!r}")
            return False
        return True

    def report(self) -> ValidationReport:
        self.out.sort(key=lambda v: (_field_sort_key(v.field), v.offset, v.code))
        return ValidationReport(self.out)


def _inside(outer: TextSpan, inner: TextSpan) -> bool:
    return outer.start <= inner.start and inner.end <= outer.end


def _mention_dedup_key(mention: PassageMention) -> tuple:
    if isinstance(mention, ExplicitMention):
        return ("explicit", mention.span.start, mention.span.end)
    if isinstance(mention, ImplicitPhraseMention):
        return ("implicit_phrase", mention.anchor.start, mention.anchor.end, mention.preposition)
    if isinstance(mention, ImplicitSentenceMention):
        return ("implicit_sentence", mention.preposition)
    return ("title", mention.span.start, mention.span.end)


def _check_boundaries(ex: QedExample, c: _Checker) -> bool:
    """Sentence boundary structure; returns True when usable for alignment."""
    clean = True
    for i, b in enumerate(ex.sentence_boundaries):
        if not c.span_ok(ex.passage, "passage", b, f"sentence_boundaries[{i}]"):
            clean = False
    if not clean:
        return False
    bs = ex.sentence_boundaries
    if not bs:
        if ex.passage.strip():
            c.add(INVALID_SENTENCE_BOUNDARIES, "sentence_boundaries", 0, "no sentence boundaries for non-empty passage")
            return False
        return True
    if ex.passage[: bs[0].start].strip():
        c.add(INVALID_SENTENCE_BOUNDARIES, "sentence_boundaries[0]", bs[0].start, "passage text before first sentence")
        return False
    for i in range(1, len(bs)):
        prev, cur = bs[i - 1], bs[i]
        if cur.start < prev.end:
            c.add(INVALID_SENTENCE_BOUNDARIES, f"sentence_boundaries[{i}]", cur.start, "sentence boundaries overlap or are out of order")
            return False
        if ex.passage[prev.end : cur.start].strip():
            c.add(INVALID_SENTENCE_BOUNDARIES, f"sentence_boundaries[{i}]", cur.start, "non-whitespace gap between sentences")
            return False
    if ex.passage[bs[-1].end :].strip():
        c.add(INVALID_SENTENCE_BOUNDARIES, f"sentence_boundaries[{len(bs) - 1}]", bs[-1].end, "passage text after last sentence")
        return False
    return True


def validate_example(
    example: QedExample,
    *,
    prepositions: frozenset[str] = DEFAULT_PREPOSITIONS,
    context: str = "gold",
) -> ValidationReport:
    """Check every structural invariant of an example.

    Violations are data, not failures: the report lists each broken
    invariant with a stable code, the field path, and a character offset,
    ordered by (field, offset). Checks on one span short-circuit (a span
    that fails its bounds check is not also reported for text mismatch),
    and checks that only make sense against a well-formed parent (e.g.
    sentence containment) are skipped when the parent itself is invalid.

    ``context`` is "gold" for corpus validation, where title mentions are
    downgraded-to-canonical via a warning, or "prediction" where they are
    silently legal.
    """
    c = _Checker()
    boundaries_ok = _check_boundaries(example, c)

    if example.label is ExplanationLabel.VALID_EXPLANATION and example.explanation is None:
        c.add(MISSING_EXPLANATION, "explanation", 0, "label valid_explanation requires an explanation")
    if example.label is not ExplanationLabel.VALID_EXPLANATION and example.explanation is not None:
        c.add(UNEXPECTED_EXPLANATION, "explanation", 0, f"label {example.label.value} must not carry an explanation")

    if example.answer_spans is not None:
        if example.label is not ExplanationLabel.ANSWER_ONLY:
            c.add(UNEXPECTED_ANSWERS, "answers", 0, f"bare answer spans are only legal for answer_only, not {example.label.value}")
        else:
            for i, span in enumerate(example.answer_spans):
                c.span_ok(example.passage, "passage", span, f"answers[{i}]")

    if example.label is ExplanationLabel.VALID_EXPLANATION and example.explanation is not None:
        _check_explanation(example, example.explanation, boundaries_ok, prepositions, context, c)

    return c.report()


def _check_explanation(
    ex: QedExample,
    expl: Explanation,
    boundaries_ok: bool,
    prepositions: frozenset[str],
    context: str,
    c: _Checker,
) -> None:
    sent = expl.selected_sentence.span
    sent_aligned = False
    sent_structural = True
    if sent.start < 0 or sent.start >= sent.end:
        c.add(INVALID_SPAN, "explanation.sentence", sent.start, f"require 0 <= start < end, got [{sent.start}, {sent.end})")
        sent_structural = False
    elif sent.end > len(ex.passage):
        c.add(SPAN_OUT_OF_BOUNDS, "explanation.sentence", sent.start, "sentence span exceeds passage length")
        sent_structural = False
    if sent_structural and boundaries_ok:
        if any(b.offsets == sent.offsets for b in ex.sentence_boundaries):
            sent_aligned = True
        else:
            c.add(SENTENCE_NOT_ALIGNED, "explanation.sentence", sent.start, "selected sentence does not coincide with a sentence boundary")

    if not expl.answers:
        c.add(NO_ANSWERS, "explanation.answers", 0, "an explanation requires at least one answer annotation")
    for i, ans in enumerate(expl.answers):
        field = f"explanation.answers[{i}].span"
        if c.span_ok(ex.passage, "passage", ans.answer_span, field) and sent_aligned:
            if not _inside(sent, ans.answer_span):
                c.add(SPAN_OUT_OF_SENTENCE, field, ans.answer_span.start, "answer span lies outside the selected sentence")
        c.span_ok(ex.passage, "passage", ans.resolved_span, f"explanation.answers[{i}].resolved")

    seen: set[tuple] = set()
    for k, eq in enumerate(expl.equalities):
        c.span_ok(ex.question, "question", eq.question_span, f"explanation.equalities[{k}].question")
        _check_mention(ex, eq.passage_mention, sent, sent_aligned, prepositions, context, f"explanation.equalities[{k}].mention", c)
        key = (eq.question_span.start, eq.question_span.end, _mention_dedup_key(eq.passage_mention))
        if key in seen:
            c.add(DUPLICATE_EQUALITY, f"explanation.equalities[{k}]", eq.question_span.start, "identical (question span, passage mention) pair appears twice")
        seen.add(key)


def _check_mention(
    ex: QedExample,
    mention: PassageMention,
    sent: TextSpan,
    sent_aligned: bool,
    prepositions: frozenset[str],
    context: str,
    field: str,
    c: _Checker,
) -> None:
    if isinstance(mention, ExplicitMention):
        if c.span_ok(ex.passage, "passage", mention.span, field) and sent_aligned:
            if not _inside(sent, mention.span):
                c.add(SPAN_OUT_OF_SENTENCE, field, mention.span.start, "explicit mention lies outside the selected sentence")
    elif isinstance(mention, ImplicitPhraseMention):
        if c.span_ok(ex.passage, "passage", mention.anchor, field) and sent_aligned:
            if not _inside(sent, mention.anchor):
                c.add(SPAN_OUT_OF_SENTENCE, field, mention.anchor.start, "implicit-mention anchor lies outside the selected sentence")
        if mention.preposition not in prepositions:
            c.add(UNKNOWN_PREPOSITION, field, mention.anchor.start, f"preposition {mention.preposition!r} not in the closed vocabulary")
    elif isinstance(mention, ImplicitSentenceMention):
        if mention.preposition not in prepositions:
            c.add(UNKNOWN_PREPOSITION, field, sent.start, f"preposition {mention.preposition!r} not in the closed vocabulary")
    elif isinstance(mention, TitleMention):
        c.span_ok(ex.title, "title", mention.span, field)
        if context == "gold":
            c.add(TITLE_LINK_IN_GOLD, field, mention.span.start, "title mention in a gold corpus; implicit variants are canonical", severity=WARNING)


# --------------------------------------------------------------------------
# Answer resolution


def resolve_answer(example: QedExample) -> list[str]:
    """Resolved answer strings, one per answer annotation, in order.

    Raises NotExplainedError unless the example carries a valid explanation.
    """
    if example.label is not ExplanationLabel.VALID_EXPLANATION or example.explanation is None:
        raise NotExplainedError(f"example {example.id} has label {example.label.value}")
    return [a.resolved_span.text for a in example.explanation.answers]


def sentence_containing(example: QedExample, span: TextSpan) -> TextSpan | None:
    """The sentence boundary fully containing ``span``, if any."""
    for b in example.sentence_boundaries:
        if _inside(b, span):
            return b
    return None
