"""Aggregation of human judging logs.

Raters see a question, passage, and candidate answer under one of three
highlight conditions (none / sentence / qed) and mark the answer correct
or incorrect. A judgment log is one JSON object per line::

    {"rater_id": ..., "instance_id": ..., "condition": "none"|"sentence"|"qed",
     "instance_correct": bool, "error_type": "pred"|"ref"?,
     "verdict": bool, "confidence": int?}

``instance_correct`` is gold (was the shown answer actually correct);
``error_type`` is present exactly when it is false. Accuracy is the rate
of ``verdict == instance_correct``.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from statistics import NormalDist
from typing import Iterable, Iterator, Sequence

from .corpus import ParseError, _iter_lines
from .errors import DuplicateJudgmentError, InconsistentGoldError


class Condition(Enum):
    NONE = "none"
    SENTENCE = "sentence"
    QED = "qed"


class JudgedErrorType(Enum):
    PRED = "pred"
    REF = "ref"


@dataclass(frozen=True)
class JudgmentRecord:
    rater_id: str
    instance_id: str
    condition: Condition
    instance_correct: bool
    verdict: bool
    error_type: JudgedErrorType | None = None
    confidence: int | None = None


def judgment_to_record(j: JudgmentRecord) -> dict:
    record: dict = {
        "rater_id": j.rater_id,
        "instance_id": j.instance_id,
        "condition": j.condition.value,
        "instance_correct": j.instance_correct,
    }
    if j.error_type is not None:
        record["error_type"] = j.error_type.value
    record["verdict"] = j.verdict
    if j.confidence is not None:
        record["confidence"] = j.confidence
    return record


def record_to_judgment(obj: dict) -> JudgmentRecord:
    if not isinstance(obj, dict):
        raise ValueError("judgment must be a JSON object")
    try:
        condition = Condition(obj["condition"])
    except (KeyError, ValueError):
        raise ValueError(f"unknown condition {obj.get('condition')!r}")
    for key in ("rater_id", "instance_id"):
        if not isinstance(obj.get(key), str):
            raise ValueError(f"missing or non-string {key}")
    for key in ("instance_correct", "verdict"):
        if not isinstance(obj.get(key), bool):
            raise ValueError(f"missing or non-boolean {key}")
    error_type = None
    if obj.get("error_type") is not None:
        try:
            error_type = JudgedErrorType(obj["error_type"])
        except ValueError:
            raise ValueError(f"unknown error_type {obj['error_type']!r}")
    if obj["instance_correct"] and error_type is not None:
        raise ValueError("error_type is only legal on incorrect instances")
    if not obj["instance_correct"] and error_type is None:
        raise ValueError("incorrect instances require an error_type")
    confidence = obj.get("confidence")
    if confidence is not None and (isinstance(confidence, bool) or not isinstance(confidence, int)):
        raise ValueError("confidence must be an integer")
    return JudgmentRecord(
        rater_id=obj["rater_id"],
        instance_id=obj["instance_id"],
        condition=condition,
        instance_correct=obj["instance_correct"],
        verdict=obj["verdict"],
        error_type=error_type,
        confidence=confidence,
    )


@dataclass
class JudgmentLog:
    records: list[JudgmentRecord]
    provenance: str
    parse_errors: list[ParseError] = field(default_factory=list)

    def __iter__(self) -> Iterator[JudgmentRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def parse_judgments(source) -> JudgmentLog:
    provenance, lines = _iter_lines(source)
    log = JudgmentLog([], provenance, [])
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            log.records.append(record_to_judgment(json.loads(stripped)))
        except (ValueError, TypeError, KeyError) as e:
            log.parse_errors.append(ParseError(lineno, str(e)))
    return log


# --------------------------------------------------------------------------
# Wilson score interval


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Preferred over the normal approximation because per-question sample
    sizes are small.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# --------------------------------------------------------------------------
# aggregation


@dataclass(frozen=True)
class ConditionStats:
    """Accuracies are percentages; None when the slice has no judgments."""

    accuracy_all: float | None
    accuracy_correct: float | None
    accuracy_incorrect: float | None
    accuracy_incorrect_pred: float | None
    accuracy_incorrect_ref: float | None
    f1_incorrect: float
    n_judgments: int
    n_correct: int
    n_incorrect: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass(frozen=True)
class QuestionAccuracy:
    instance_id: str
    accuracy: float
    ci_low: float
    ci_high: float
    n: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass(frozen=True)
class RaterReport:
    conditions: dict[Condition, ConditionStats]
    per_question: dict[Condition, tuple[QuestionAccuracy, ...]]

    def to_dict(self) -> dict:
        return {
            "conditions": {c.value: s.to_dict() for c, s in self.conditions.items()},
            "per_question": {
                c.value: [q.to_dict() for q in qs] for c, qs in self.per_question.items()
            },
        }


def _check_log(records: Sequence[JudgmentRecord]) -> None:
    seen: set[tuple[str, str]] = set()
    gold: dict[str, tuple[bool, JudgedErrorType | None]] = {}
    for r in records:
        key = (r.rater_id, r.instance_id)
        if key in seen:
            raise DuplicateJudgmentError(f"rater {r.rater_id!r} judged instance {r.instance_id!r} twice")
        seen.add(key)
        payload = (r.instance_correct, r.error_type)
        if r.instance_id in gold and gold[r.instance_id] != payload:
            raise InconsistentGoldError(f"instance {r.instance_id!r} carries conflicting gold correctness")
        gold[r.instance_id] = payload


def _accuracy(records: list[JudgmentRecord], weighting: str) -> float | None:
    if not records:
        return None
    if weighting == "judgment":
        hits = sum(1 for r in records if r.verdict == r.instance_correct)
        return 100.0 * hits / len(records)
    per_rater: dict[str, list[JudgmentRecord]] = defaultdict(list)
    for r in records:
        per_rater[r.rater_id].append(r)
    values = [
        100.0 * sum(1 for r in rs if r.verdict == r.instance_correct) / len(rs)
        for rs in per_rater.values()
    ]
    return sum(values) / len(values)


def _f1_incorrect(records: list[JudgmentRecord]) -> float:
    # Positive class: the rater flags the instance as incorrect.
    tp = sum(1 for r in records if not r.verdict and not r.instance_correct)
    flags = sum(1 for r in records if not r.verdict)
    gold_incorrect = sum(1 for r in records if not r.instance_correct)
    p = tp / flags if flags else 0.0
    r = tp / gold_incorrect if gold_incorrect else 0.0
    return 100.0 * (2 * p * r / (p + r)) if p + r else 0.0


def aggregate_judgments(
    records: Sequence[JudgmentRecord] | JudgmentLog, *, weighting: str = "judgment"
) -> RaterReport:
    """Per-condition accuracies and incorrect-detection F1, plus per-question
    accuracy curves with 95% Wilson intervals.

    ``weighting="judgment"`` counts every record once (the default);
    ``"rater"`` averages per-rater accuracies instead. F1 is always
    judgment-pooled. Raises DuplicateJudgmentError / InconsistentGoldError
    on malformed logs. Order-independent: permuting the log changes nothing.
    """
    if isinstance(records, JudgmentLog):
        records = records.records
    if not records:
        raise ValueError("empty judgment log")
    if weighting not in ("judgment", "rater"):
        raise ValueError(f"unknown weighting {weighting!r}")
    _check_log(records)
    by_condition: dict[Condition, list[JudgmentRecord]] = defaultdict(list)
    for r in records:
        by_condition[r.condition].append(r)

    conditions: dict[Condition, ConditionStats] = {}
    per_question: dict[Condition, tuple[QuestionAccuracy, ...]] = {}
    for condition in Condition:
        rs = by_condition.get(condition)
        if not rs:
            continue
        correct = [r for r in rs if r.instance_correct]
        incorrect = [r for r in rs if not r.instance_correct]
        conditions[condition] = ConditionStats(
            accuracy_all=_accuracy(rs, weighting),
            accuracy_correct=_accuracy(correct, weighting),
            accuracy_incorrect=_accuracy(incorrect, weighting),
            accuracy_incorrect_pred=_accuracy(
                [r for r in incorrect if r.error_type is JudgedErrorType.PRED], weighting
            ),
            accuracy_incorrect_ref=_accuracy(
                [r for r in incorrect if r.error_type is JudgedErrorType.REF], weighting
            ),
            f1_incorrect=_f1_incorrect(rs),
            n_judgments=len(rs),
            n_correct=len(correct),
            n_incorrect=len(incorrect),
        )
        per_question[condition] = tuple(per_question_accuracy(rs))
    return RaterReport(conditions=conditions, per_question=per_question)


def per_question_accuracy(records: Sequence[JudgmentRecord]) -> list[QuestionAccuracy]:
    """Accuracy per instance across raters with a 95% Wilson interval,
    sorted ascending by accuracy, ties by instance id."""
    groups: dict[str, list[JudgmentRecord]] = defaultdict(list)
    for r in records:
        groups[r.instance_id].append(r)
    out = []
    for instance_id, rs in groups.items():
        hits = sum(1 for r in rs if r.verdict == r.instance_correct)
        low, high = wilson_interval(hits, len(rs))
        out.append(QuestionAccuracy(instance_id, hits / len(rs), low, high, len(rs)))
    out.sort(key=lambda q: (q.accuracy, q.instance_id))
    return out


_CONDITION_DISPLAY = {Condition.NONE: "None", Condition.SENTENCE: "Sentence", Condition.QED: "QED"}


def _fmt(value: float | None) -> str:
    return f"{value:.1f}" if value is not None else "-"


def format_rater_table(report: RaterReport) -> str:
    lines = [
        "            Accuracy                              F1",
        "            All     Corr    Incorr/Pred/Ref       Incorr",
    ]
    for condition in Condition:
        stats = report.conditions.get(condition)
        if stats is None:
            continue
        breakdown = "/".join(
            _fmt(v)
            for v in (stats.accuracy_incorrect, stats.accuracy_incorrect_pred, stats.accuracy_incorrect_ref)
        )
        lines.append(
            f"{_CONDITION_DISPLAY[condition]:<12}"
            f"{_fmt(stats.accuracy_all):<8}{_fmt(stats.accuracy_correct):<8}{breakdown:<22}{stats.f1_incorrect:.1f}"
        )
    return "\n".join(lines) + "\n"
