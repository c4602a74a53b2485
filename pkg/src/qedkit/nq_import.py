"""Best-effort importer for the released annotation-dataset format.

Maps released records onto the canonical schema. The released format is
not formally documented here, so the mapping is provisional, in particular
for bridged mentions; fidelity should be checked against published
aggregate counts after import (see the `stats` subcommand).

Expected released record fields:

    example_id        int or str
    title_text        str
    url               str (optional)
    question_text     str
    paragraph_text    str
    sentence_starts   [int, ...] character offsets of sentence starts
    annotation        {"explanation_type": "single_sentence" | "multi_sentence" | "none",
                       "selected_sentence": {"start": int, "end": int},
                       "referential_equalities": [
                           {"question_reference": {"start", "end"},
                            "sentence_reference": {"start", "end", "bridge"}}, ...],
                       "answer": [{"sentence_reference": {"start", "end"},
                                   "paragraph_reference": {"start", "end"}}, ...]}
    original_nq_answers  [{"start": int, "end": int}, ...] (optional)

Bridge mapping: ``bridge`` false/absent means an explicit span;
a string with a usable anchor span means a phrase-anchored implicit
mention; a string without one means a sentence-level implicit mention.
"""

from __future__ import annotations

import json

from .corpus import CorpusDocument, ParseError, _iter_lines
from .model import (
    AnswerAnnotation,
    Explanation,
    ExplanationLabel,
    ExplicitMention,
    ImplicitPhraseMention,
    ImplicitSentenceMention,
    QedExample,
    ReferentialEquality,
    SentenceSpan,
    TextSpan,
)

_TYPE_TO_LABEL = {
    "single_sentence": ExplanationLabel.VALID_EXPLANATION,
    "multi_sentence": ExplanationLabel.ANSWER_ONLY,
    "none": ExplanationLabel.NO_ANSWER,
}


def _ref_offsets(ref, where: str) -> tuple[int, int]:
    if not isinstance(ref, dict) or "start" not in ref or "end" not in ref:
        raise ValueError(f"{where}: expected an object with start/end")
    return int(ref["start"]), int(ref["end"])


def _boundaries(passage: str, starts: list[int]) -> tuple[TextSpan, ...]:
    spans = []
    for i, start in enumerate(starts):
        raw_end = starts[i + 1] if i + 1 < len(starts) else len(passage)
        end = len(passage[:raw_end].rstrip())
        if end > start:
            spans.append(TextSpan.from_host(passage, start, end))
    return tuple(spans)


def import_released_record(obj: dict) -> QedExample:
    """Convert one released-format record; raises ValueError when unusable."""
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    ex_id = str(obj.get("example_id", "")).strip()
    if not ex_id:
        raise ValueError("missing example_id")
    passage = obj.get("paragraph_text")
    question = obj.get("question_text")
    if not isinstance(passage, str) or not isinstance(question, str):
        raise ValueError(f"{ex_id}: missing question_text/paragraph_text")
    title = obj.get("title_text") or ""
    url = obj.get("url") if isinstance(obj.get("url"), str) else None
    starts = obj.get("sentence_starts")
    if not isinstance(starts, list) or not all(isinstance(s, int) for s in starts):
        raise ValueError(f"{ex_id}: missing sentence_starts")
    boundaries = _boundaries(passage, starts)

    annotation = obj.get("annotation") or {}
    expl_type = annotation.get("explanation_type")
    if expl_type not in _TYPE_TO_LABEL:
        raise ValueError(f"{ex_id}: unknown explanation_type {expl_type!r}")
    label = _TYPE_TO_LABEL[expl_type]

    explanation = None
    if label is ExplanationLabel.VALID_EXPLANATION:
        s0, s1 = _ref_offsets(annotation.get("selected_sentence"), f"{ex_id}.selected_sentence")
        equalities = []
        for i, eq in enumerate(annotation.get("referential_equalities", [])):
            where = f"{ex_id}.referential_equalities[{i}]"
            q0, q1 = _ref_offsets(eq.get("question_reference"), where)
            sref = eq.get("sentence_reference") or {}
            bridge = sref.get("bridge")
            if bridge:
                prep = str(bridge).strip()
                p0, p1 = int(sref.get("start", -1)), int(sref.get("end", -1))
                if 0 <= p0 < p1 <= len(passage):
                    mention = ImplicitPhraseMention(TextSpan.from_host(passage, p0, p1), prep)
                else:
                    mention = ImplicitSentenceMention(prep)
            else:
                p0, p1 = _ref_offsets(sref, where)
                mention = ExplicitMention(TextSpan.from_host(passage, p0, p1))
            equalities.append(ReferentialEquality(TextSpan.from_host(question, q0, q1), mention))
        answers = []
        for i, ans in enumerate(annotation.get("answer", [])):
            where = f"{ex_id}.answer[{i}]"
            a0, a1 = _ref_offsets(ans.get("sentence_reference"), where)
            r0, r1 = _ref_offsets(ans.get("paragraph_reference", ans.get("sentence_reference")), where)
            answers.append(
                AnswerAnnotation(TextSpan.from_host(passage, a0, a1), TextSpan.from_host(passage, r0, r1))
            )
        explanation = Explanation(
            selected_sentence=SentenceSpan(TextSpan.from_host(passage, s0, s1)),
            equalities=tuple(equalities),
            answers=tuple(answers),
        )

    answer_spans = None
    if label is ExplanationLabel.ANSWER_ONLY:
        spans = []
        for ans in obj.get("original_nq_answers") or []:
            try:
                a0, a1 = _ref_offsets(ans, f"{ex_id}.original_nq_answers")
            except ValueError:
                continue
            if 0 <= a0 < a1 <= len(passage):
                spans.append(TextSpan.from_host(passage, a0, a1))
        answer_spans = tuple(spans) if spans else None

    return QedExample(
        id=ex_id,
        title=title,
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=label,
        explanation=explanation,
        answer_spans=answer_spans,
        url=url,
    )


def import_released(source) -> CorpusDocument:
    """Import a released-format file into a canonical CorpusDocument."""
    provenance, lines = _iter_lines(source)
    doc = CorpusDocument([], provenance, [])
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            doc.examples.append(import_released_record(json.loads(stripped)))
        except (ValueError, TypeError, KeyError) as e:
            doc.parse_errors.append(ParseError(lineno, str(e)))
    return doc
