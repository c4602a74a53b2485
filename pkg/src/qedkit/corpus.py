"""Line-delimited JSON codec for gold corpora and prediction files.

Canonical record, one JSON object per line (all offsets are code-point
indices, spans are half-open ``[start, end)`` pairs)::

    {"id": ..., "title": ..., "url": ...?, "question": ..., "passage": ...,
     "sentence_boundaries": [[s, e], ...],
     "label": "valid_explanation" | "answer_only" | "no_answer",
     "explanation": {"sentence": [s, e],
                     "equalities": [{"question": [s, e], "mention": M}, ...],
                     "answers": [{"span": [s, e], "resolved": [s, e]}, ...]}?,
     "answers": [[s, e], ...]?}

where a mention M is one of::

    {"kind": "explicit", "span": [s, e]}
    {"kind": "implicit_phrase", "anchor": [s, e], "prep": w}
    {"kind": "implicit_sentence", "prep": w}
    {"kind": "title", "span": [s, e]}

The top-level "answers" field carries bare answer spans for answer_only
examples. Prediction records are ``{"id", ...}`` plus any of "label",
"explanation", "answers"; their spans are kept as raw offsets since they
only gain surface text once bound to a gold example.

Serialization is canonical: fixed field order, compact separators, one
record per line, trailing newline; bit-stable across runs.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CorpusEncodingError, CorpusIOError, InvalidCorpusError
from .model import (
    DUPLICATE_ID,
    AnswerAnnotation,
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
    Violation,
    validate_example,
)

_LABELS = {label.value: label for label in ExplanationLabel}


@dataclass(frozen=True)
class ParseError:
    line: int
    message: str


@dataclass
class CorpusDocument:
    examples: list[QedExample]
    provenance: str
    parse_errors: list[ParseError] = field(default_factory=list)

    def __iter__(self) -> Iterator[QedExample]:
        return iter(self.examples)

    def __len__(self) -> int:
        return len(self.examples)


# Raw prediction structures: offsets only, no cached text.


@dataclass(frozen=True)
class RawMention:
    kind: str
    start: int = -1
    end: int = -1
    preposition: str | None = None


@dataclass(frozen=True)
class RawEquality:
    question: tuple[int, int]
    mention: RawMention


@dataclass(frozen=True)
class RawExplanation:
    sentence: tuple[int, int]
    equalities: tuple[RawEquality, ...]
    answers: tuple[tuple[tuple[int, int], tuple[int, int]], ...]


@dataclass(frozen=True)
class PredictionRecord:
    example_id: str
    predicted_label: ExplanationLabel | None = None
    predicted_explanation: RawExplanation | None = None
    predicted_answer_spans: tuple[tuple[int, int], ...] | None = None


@dataclass
class PredictionDocument:
    records: list[PredictionRecord]
    provenance: str
    parse_errors: list[ParseError] = field(default_factory=list)

    def __iter__(self) -> Iterator[PredictionRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


# --------------------------------------------------------------------------
# dict <-> domain objects


def _span_pair(span: TextSpan) -> list[int]:
    return [span.start, span.end]


def _mention_to_obj(m: PassageMention) -> dict:
    if isinstance(m, ExplicitMention):
        return {"kind": "explicit", "span": _span_pair(m.span)}
    if isinstance(m, ImplicitPhraseMention):
        return {"kind": "implicit_phrase", "anchor": _span_pair(m.anchor), "prep": m.preposition}
    if isinstance(m, ImplicitSentenceMention):
        return {"kind": "implicit_sentence", "prep": m.preposition}
    assert isinstance(m, TitleMention)
    return {"kind": "title", "span": _span_pair(m.span)}


def example_to_record(ex: QedExample) -> dict:
    record: dict = {"id": ex.id, "title": ex.title}
    if ex.url is not None:
        record["url"] = ex.url
    record["question"] = ex.question
    record["passage"] = ex.passage
    record["sentence_boundaries"] = [_span_pair(b) for b in ex.sentence_boundaries]
    record["label"] = ex.label.value
    if ex.explanation is not None:
        expl = ex.explanation
        record["explanation"] = {
            "sentence": _span_pair(expl.selected_sentence.span),
            "equalities": [
                {"question": _span_pair(eq.question_span), "mention": _mention_to_obj(eq.passage_mention)}
                for eq in expl.equalities
            ],
            "answers": [
                {"span": _span_pair(a.answer_span), "resolved": _span_pair(a.resolved_span)}
                for a in expl.answers
            ],
        }
    if ex.answer_spans is not None:
        record["answers"] = [_span_pair(s) for s in ex.answer_spans]
    return record


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise ValueError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ValueError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _offsets(value, where: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise ValueError(f"{where}: span must be a [start, end] pair of integers")
    return (value[0], value[1])


def _span_from(value, host: str, where: str) -> TextSpan:
    start, end = _offsets(value, where)
    return TextSpan.from_host(host, start, end)


def _mention_from(obj, ex_passage: str, ex_title: str, where: str) -> PassageMention:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: mention must be an object")
    kind = _require(obj, "kind", str, where)
    if kind == "explicit":
        return ExplicitMention(span=_span_from(obj.get("span"), ex_passage, where))
    if kind == "implicit_phrase":
        return ImplicitPhraseMention(
            anchor=_span_from(obj.get("anchor"), ex_passage, where),
            preposition=_require(obj, "prep", str, where),
        )
    if kind == "implicit_sentence":
        return ImplicitSentenceMention(preposition=_require(obj, "prep", str, where))
    if kind == "title":
        return TitleMention(span=_span_from(obj.get("span"), ex_title, where))
    raise ValueError(f"{where}: unknown mention kind {kind!r}")


def record_to_example(obj: dict) -> QedExample:
    """Structural parse of one canonical record. Raises ValueError on shape
    problems; invariant checks (bounds, text integrity) are the validator's
    job, not the codec's."""
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    ex_id = _require(obj, "id", str, "record")
    title = _require(obj, "title", str, ex_id)
    question = _require(obj, "question", str, ex_id)
    passage = _require(obj, "passage", str, ex_id)
    url = obj.get("url")
    if url is not None and not isinstance(url, str):
        raise ValueError(f"{ex_id}: url must be a string")
    label_value = _require(obj, "label", str, ex_id)
    if label_value not in _LABELS:
        raise ValueError(f"{ex_id}: unknown label {label_value!r}")
    boundaries_raw = _require(obj, "sentence_boundaries", list, ex_id)
    boundaries = tuple(
        _span_from(b, passage, f"{ex_id}.sentence_boundaries[{i}]") for i, b in enumerate(boundaries_raw)
    )

    explanation = None
    if obj.get("explanation") is not None:
        e = obj["explanation"]
        if not isinstance(e, dict):
            raise ValueError(f"{ex_id}: explanation must be an object")
        sentence = _span_from(e.get("sentence"), passage, f"{ex_id}.explanation.sentence")
        equalities = []
        for i, eq in enumerate(e.get("equalities", [])):
            if not isinstance(eq, dict):
                raise ValueError(f"{ex_id}: equality must be an object")
            where = f"{ex_id}.explanation.equalities[{i}]"
            equalities.append(
                ReferentialEquality(
                    question_span=_span_from(eq.get("question"), question, where),
                    passage_mention=_mention_from(eq.get("mention"), passage, title, where),
                )
            )
        answers = []
        for i, a in enumerate(e.get("answers", [])):
            if not isinstance(a, dict):
                raise ValueError(f"{ex_id}: answer must be an object")
            where = f"{ex_id}.explanation.answers[{i}]"
            answers.append(
                AnswerAnnotation(
                    answer_span=_span_from(a.get("span"), passage, where),
                    resolved_span=_span_from(a.get("resolved"), passage, where),
                )
            )
        explanation = Explanation(
            selected_sentence=SentenceSpan(sentence),
            equalities=tuple(equalities),
            answers=tuple(answers),
        )

    answer_spans = None
    if obj.get("answers") is not None:
        raw = obj["answers"]
        if not isinstance(raw, list):
            raise ValueError(f"{ex_id}: answers must be a list of spans")
        answer_spans = tuple(_span_from(s, passage, f"{ex_id}.answers[{i}]") for i, s in enumerate(raw))

    return QedExample(
        id=ex_id,
        title=title,
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=_LABELS[label_value],
        explanation=explanation,
        answer_spans=answer_spans,
        url=url,
    )


# --------------------------------------------------------------------------
# prediction dict <-> raw structures


def raw_from_explanation(expl: Explanation) -> RawExplanation:
    return RawExplanation(
        sentence=expl.selected_sentence.span.offsets,
        equalities=tuple(
            RawEquality(question=eq.question_span.offsets, mention=raw_mention(eq.passage_mention))
            for eq in expl.equalities
        ),
        answers=tuple((a.answer_span.offsets, a.resolved_span.offsets) for a in expl.answers),
    )


def raw_mention(m: PassageMention) -> RawMention:
    if isinstance(m, ExplicitMention):
        return RawMention("explicit", m.span.start, m.span.end)
    if isinstance(m, ImplicitPhraseMention):
        return RawMention("implicit_phrase", m.anchor.start, m.anchor.end, m.preposition)
    if isinstance(m, ImplicitSentenceMention):
        return RawMention("implicit_sentence", preposition=m.preposition)
    assert isinstance(m, TitleMention)
    return RawMention("title", m.span.start, m.span.end)


def bind_explanation(raw: RawExplanation, example: QedExample) -> Explanation:
    """Attach a raw (offsets-only) explanation to a gold example's hosts."""
    passage, title, question = example.passage, example.title, example.question

    def mention(m: RawMention) -> PassageMention:
        if m.kind == "explicit":
            return ExplicitMention(TextSpan.from_host(passage, m.start, m.end))
        if m.kind == "implicit_phrase":
            return ImplicitPhraseMention(TextSpan.from_host(passage, m.start, m.end), m.preposition or "")
        if m.kind == "implicit_sentence":
            return ImplicitSentenceMention(m.preposition or "")
        if m.kind == "title":
            return TitleMention(TextSpan.from_host(title, m.start, m.end))
        raise ValueError(f"unknown mention kind {m.kind!r}")

    return Explanation(
        selected_sentence=SentenceSpan(TextSpan.from_host(passage, *raw.sentence)),
        equalities=tuple(
            ReferentialEquality(TextSpan.from_host(question, *eq.question), mention(eq.mention))
            for eq in raw.equalities
        ),
        answers=tuple(
            AnswerAnnotation(TextSpan.from_host(passage, *span), TextSpan.from_host(passage, *resolved))
            for span, resolved in raw.answers
        ),
    )


def _raw_mention_from_obj(obj, where: str) -> RawMention:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: mention must be an object")
    kind = _require(obj, "kind", str, where)
    if kind == "explicit" or kind == "title":
        start, end = _offsets(obj.get("span"), where)
        return RawMention(kind, start, end)
    if kind == "implicit_phrase":
        start, end = _offsets(obj.get("anchor"), where)
        return RawMention(kind, start, end, _require(obj, "prep", str, where))
    if kind == "implicit_sentence":
        return RawMention(kind, preposition=_require(obj, "prep", str, where))
    raise ValueError(f"{where}: unknown mention kind {kind!r}")


def raw_explanation_from_obj(obj: dict, where: str = "explanation") -> RawExplanation:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: explanation must be an object")
    sentence = _offsets(obj.get("sentence"), f"{where}.sentence")
    equalities = []
    for i, eq in enumerate(obj.get("equalities", [])):
        if not isinstance(eq, dict):
            raise ValueError(f"{where}.equalities[{i}]: equality must be an object")
        equalities.append(
            RawEquality(
                question=_offsets(eq.get("question"), f"{where}.equalities[{i}].question"),
                mention=_raw_mention_from_obj(eq.get("mention"), f"{where}.equalities[{i}].mention"),
            )
        )
    answers = []
    for i, a in enumerate(obj.get("answers", [])):
        if not isinstance(a, dict):
            raise ValueError(f"{where}.answers[{i}]: answer must be an object")
        answers.append(
            (
                _offsets(a.get("span"), f"{where}.answers[{i}].span"),
                _offsets(a.get("resolved"), f"{where}.answers[{i}].resolved"),
            )
        )
    return RawExplanation(sentence=sentence, equalities=tuple(equalities), answers=tuple(answers))


def _raw_mention_to_obj(m: RawMention) -> dict:
    if m.kind in ("explicit", "title"):
        return {"kind": m.kind, "span": [m.start, m.end]}
    if m.kind == "implicit_phrase":
        return {"kind": m.kind, "anchor": [m.start, m.end], "prep": m.preposition}
    return {"kind": m.kind, "prep": m.preposition}


def prediction_to_record(pred: PredictionRecord) -> dict:
    record: dict = {"id": pred.example_id}
    if pred.predicted_label is not None:
        record["label"] = pred.predicted_label.value
    if pred.predicted_explanation is not None:
        raw = pred.predicted_explanation
        record["explanation"] = {
            "sentence": list(raw.sentence),
            "equalities": [
                {"question": list(eq.question), "mention": _raw_mention_to_obj(eq.mention)}
                for eq in raw.equalities
            ],
            "answers": [{"span": list(span), "resolved": list(resolved)} for span, resolved in raw.answers],
        }
    if pred.predicted_answer_spans is not None:
        record["answers"] = [list(s) for s in pred.predicted_answer_spans]
    return record


def record_to_prediction(obj: dict) -> PredictionRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    ex_id = _require(obj, "id", str, "prediction")
    label = None
    if obj.get("label") is not None:
        value = obj["label"]
        if value not in _LABELS:
            raise ValueError(f"{ex_id}: unknown label {value!r}")
        label = _LABELS[value]
    explanation = None
    if obj.get("explanation") is not None:
        explanation = raw_explanation_from_obj(obj["explanation"], f"{ex_id}.explanation")
    answers = None
    if obj.get("answers") is not None:
        raw = obj["answers"]
        if not isinstance(raw, list):
            raise ValueError(f"{ex_id}: answers must be a list of spans")
        answers = tuple(_offsets(s, f"{ex_id}.answers[{i}]") for i, s in enumerate(raw))
    return PredictionRecord(ex_id, label, explanation, answers)


# --------------------------------------------------------------------------
# streaming parse / canonical serialize


def _iter_lines(source) -> tuple[str, Iterator[str]]:
    """Yield decoded lines from a path, bytes, or file-like object."""
    if isinstance(source, (str, Path)):
        path = Path(source)

        def gen_path() -> Iterator[str]:
            try:
                with open(path, "rb") as fh:
                    for i, raw in enumerate(fh, 1):
                        yield _decode(raw, i)
            except OSError as e:
                raise CorpusIOError(str(e)) from e

        return str(path), gen_path()
    if isinstance(source, bytes):
        return "<bytes>", (_decode(raw, i) for i, raw in enumerate(io.BytesIO(source), 1))
    if hasattr(source, "read"):
        name = getattr(source, "name", "<stream>")

        def gen_file() -> Iterator[str]:
            try:
                for i, raw in enumerate(source, 1):
                    yield _decode(raw, i) if isinstance(raw, bytes) else raw
            except OSError as e:
                raise CorpusIOError(str(e)) from e

        return str(name), gen_file()
    raise TypeError(f"cannot read corpus from {type(source).__name__}")


def _decode(raw: bytes, lineno: int) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorpusEncodingError(f"line {lineno}: invalid UTF-8 ({e})") from e


def parse_corpus(source) -> CorpusDocument:
    """Parse a line-delimited corpus; one bad line never aborts the rest.

    Raises CorpusIOError / CorpusEncodingError for unreadable streams or
    invalid UTF-8; malformed records land in ``parse_errors`` instead.
    """
    provenance, lines = _iter_lines(source)
    doc = CorpusDocument([], provenance, [])
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            doc.examples.append(record_to_example(json.loads(stripped)))
        except (ValueError, TypeError, KeyError) as e:
            doc.parse_errors.append(ParseError(lineno, str(e)))
    return doc


def parse_predictions(source) -> PredictionDocument:
    """Parse a prediction file; same error-isolation contract as parse_corpus."""
    provenance, lines = _iter_lines(source)
    doc = PredictionDocument([], provenance, [])
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            doc.records.append(record_to_prediction(json.loads(stripped)))
        except (ValueError, TypeError, KeyError) as e:
            doc.parse_errors.append(ParseError(lineno, str(e)))
    return doc


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def serialize_corpus(doc: CorpusDocument | Sequence[QedExample], *, validate: bool = True) -> bytes:
    """Canonical byte serialization; bit-stable across runs.

    With ``validate`` (the default) every example must pass validation at
    error level, otherwise InvalidCorpusError; pass ``validate=False`` to
    waive that precondition explicitly.
    """
    examples = doc.examples if isinstance(doc, CorpusDocument) else list(doc)
    if validate:
        for ex in examples:
            report = validate_example(ex)
            if not report.is_valid:
                raise InvalidCorpusError(f"example {ex.id}: {[v.code for v in report.errors]}")
    lines = [_dump(example_to_record(ex)) for ex in examples]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def serialize_predictions(records: Sequence[PredictionRecord]) -> bytes:
    lines = [_dump(prediction_to_record(r)) for r in records]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def corpus_violations(doc: CorpusDocument) -> list[Violation]:
    """Corpus-level checks: duplicate example ids."""
    seen: dict[str, int] = {}
    out = []
    for i, ex in enumerate(doc.examples):
        if ex.id in seen:
            out.append(Violation(DUPLICATE_ID, f"examples[{i}].id", 0, f"id {ex.id!r} already used by example {seen[ex.id]}"))
        else:
            seen[ex.id] = i
    return out
