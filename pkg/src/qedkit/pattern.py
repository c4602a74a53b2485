"""Entailment pattern extraction.

Abstracts referentially equal phrases to shared placeholders X1..Xn and
answer spans to ANSWER, yielding a question template / sentence template
pair. Placeholders are numbered by order of appearance in the question.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NotExplainedError, OverlappingSpansError
from .model import (
    ExplanationLabel,
    ExplicitMention,
    ImplicitPhraseMention,
    ImplicitSentenceMention,
    QedExample,
    TitleMention,
)

#: Possessive pronouns whose placeholder absorbs the possessive reading.
POSSESSIVE_PRONOUNS = frozenset(
    {"its", "his", "her", "hers", "their", "theirs", "whose", "my", "our", "your"}
)

_TRAILING_PUNCT_RE = re.compile(r"[.!?]+$")


@dataclass(frozen=True)
class PatternSlot:
    """One placeholder: what it stands for on each side.

    ``sentence_text`` is the exact sentence substring the placeholder
    replaced (including an absorbed possessive marker), or None for
    implicit mentions where the placeholder was inserted rather than
    substituted; ``inserted`` then holds the inserted rendering.
    """

    placeholder: str
    kind: str
    question_text: str
    sentence_text: str | None = None
    preposition: str | None = None
    inserted: str | None = None


@dataclass(frozen=True)
class EntailmentPattern:
    question_template: str
    sentence_template: str
    slots: tuple[PatternSlot, ...]
    answer_texts: tuple[str, ...]
    possessive_normalized: bool

    @property
    def has_implicit(self) -> bool:
        return any(s.sentence_text is None for s in self.slots)

    def restore_question(self) -> str:
        out = self.question_template
        for slot in self.slots:
            out = _replace_placeholder(out, slot.placeholder, slot.question_text)
        return out

    def restore_sentence(self) -> str:
        """Undo the abstraction: reinsert replaced texts, drop insertions."""
        out = self.sentence_template
        for slot in self.slots:
            if slot.sentence_text is None:
                out = out.replace(slot.inserted or "", "", 1)
            else:
                out = _replace_placeholder(out, slot.placeholder, slot.sentence_text)
        for text in self.answer_texts:
            out = out.replace("ANSWER", text, 1)
        return out


def _replace_placeholder(s: str, placeholder: str, replacement: str) -> str:
    # X1 must not match inside X10.
    return re.sub(rf"{re.escape(placeholder)}(?!\d)", replacement.replace("\\", "\\\\"), s, count=1)


def _apply_edits(s: str, edits: list[tuple[int, int, int, str]]) -> str:
    """Replace ``s[a:b]`` with text for every ``(a, b, order, text)`` edit.

    Edits must not overlap; insertions are zero-width (a == b). Applied
    right to left so offsets stay valid; ties at one position resolve by
    the ``order`` index so earlier slots land earlier in the string.
    """
    ordered = sorted(edits, key=lambda e: (e[0], e[1], e[2]))
    for (_, b, _, _), (a2, _, _, _) in zip(ordered, ordered[1:]):
        if a2 < b:
            raise OverlappingSpansError(f"edits overlap at [{a2}, {b})")
    out = s
    for a, b, _, text in reversed(ordered):
        out = out[:a] + text + out[b:]
    return out


def extract_pattern(example: QedExample) -> EntailmentPattern:
    """Extract the entailment pattern of a validly explained example.

    Question-side equality spans become X1..Xn in order of appearance in
    the question; the matching sentence-side mentions become the same
    placeholder. Answer spans become ANSWER (once per answer annotation).
    Implicit mentions insert "<prep> Xk" after their anchor (phrase level)
    or before the sentence's trailing punctuation (sentence level). A
    sentence-side span followed by "'s", or consisting of a possessive
    pronoun, absorbs the possessive into the placeholder; such cases are
    flagged via ``possessive_normalized``.

    Raises OverlappingSpansError when substituted spans overlap in one
    host string, and NotExplainedError when there is no explanation.
    """
    if example.label is not ExplanationLabel.VALID_EXPLANATION or example.explanation is None:
        raise NotExplainedError(f"example {example.id} has label {example.label.value}")
    expl = example.explanation
    sent = expl.selected_sentence.span
    sentence = example.passage[sent.start : sent.end]

    ordered = sorted(
        enumerate(expl.equalities),
        key=lambda item: (item[1].question_span.start, item[1].question_span.end, item[0]),
    )

    q_edits: list[tuple[int, int, int, str]] = []
    s_edits: list[tuple[int, int, int, str]] = []
    slots: list[PatternSlot] = []
    possessive = False

    m = _TRAILING_PUNCT_RE.search(sentence)
    sentence_final = m.start() if m else len(sentence)

    for number, (_, eq) in enumerate(ordered, start=1):
        placeholder = f"X{number}"
        q_edits.append((eq.question_span.start, eq.question_span.end, number, placeholder))
        mention = eq.passage_mention
        if isinstance(mention, ExplicitMention):
            a = mention.span.start - sent.start
            b = mention.span.end - sent.start
            if sentence[b : b + 2] in ("'s", "’s"):
                b += 2
                possessive = True
            replaced = sentence[a:b]
            if replaced.lower() in POSSESSIVE_PRONOUNS:
                possessive = True
            s_edits.append((a, b, number, placeholder))
            slots.append(PatternSlot(placeholder, mention.kind, eq.question_span.text, sentence_text=replaced))
        elif isinstance(mention, ImplicitPhraseMention):
            inserted = f" {mention.preposition} {placeholder}"
            pos = mention.anchor.end - sent.start
            s_edits.append((pos, pos, number, inserted))
            slots.append(
                PatternSlot(placeholder, mention.kind, eq.question_span.text, preposition=mention.preposition, inserted=inserted)
            )
        elif isinstance(mention, ImplicitSentenceMention):
            inserted = f" {mention.preposition} {placeholder}"
            s_edits.append((sentence_final, sentence_final, number, inserted))
            slots.append(
                PatternSlot(placeholder, mention.kind, eq.question_span.text, preposition=mention.preposition, inserted=inserted)
            )
        else:
            assert isinstance(mention, TitleMention)
            inserted = f" {placeholder}"
            s_edits.append((sentence_final, sentence_final, number, inserted))
            slots.append(PatternSlot(placeholder, mention.kind, eq.question_span.text, inserted=inserted))

    answers = sorted(expl.answers, key=lambda a: (a.answer_span.start, a.answer_span.end))
    for j, ans in enumerate(answers):
        s_edits.append((ans.answer_span.start - sent.start, ans.answer_span.end - sent.start, len(ordered) + 1 + j, "ANSWER"))

    question_template = _apply_edits(example.question, q_edits)
    sentence_template = _apply_edits(sentence, s_edits)
    return EntailmentPattern(
        question_template=question_template,
        sentence_template=sentence_template,
        slots=tuple(slots),
        answer_texts=tuple(a.answer_span.text for a in answers),
        possessive_normalized=possessive,
    )
