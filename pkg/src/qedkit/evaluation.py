"""Scoring for explanation prediction and inter-annotator agreement.

Two per-example views of an explanation are scored:

* mention identification: the set of individual referential expressions
  (question side and passage side pooled, but keyed by side);
* mention alignment: the set of full (question mention, passage mention)
  equality pairs.

Matching is exact on (side, kind, offsets, preposition). Under the default
policy a predicted title mention matches a gold implicit mention and vice
versa, regardless of preposition or anchor, mirroring the convention that
implicit arguments are modeled as title links. Corpus metrics pool counts
(micro-average); a macro mode averages per-example precision/recall.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .corpus import CorpusDocument, PredictionDocument, PredictionRecord, RawExplanation, RawMention
from .errors import DuplicateIdError, IdMismatchError, UnknownIdError
from .model import (
    Explanation,
    ExplanationLabel,
    ExplicitMention,
    ImplicitPhraseMention,
    ImplicitSentenceMention,
    PassageMention,
    QedExample,
    TextSpan,
    TitleMention,
)

QUESTION = "question"
PASSAGE = "passage"

_IMPLICIT_FAMILY = frozenset({"implicit_phrase", "implicit_sentence", "title"})


@dataclass(frozen=True)
class MentionKey:
    """Canonical identity of one mention for exact matching."""

    side: str
    kind: str
    start: int = -1
    end: int = -1
    preposition: str = ""


@dataclass(frozen=True)
class EvalPolicy:
    """Matching and averaging knobs.

    title_equivalence: passage-side implicit and title mentions all compare
    equal (the default); off requires exact variant equality.
    averaging: "micro" pools counts across the corpus; "macro" averages
    per-example precision/recall, with F1 the harmonic mean of the averages.
    """

    title_equivalence: bool = True
    averaging: str = "micro"


def question_key(span: TextSpan | tuple[int, int]) -> MentionKey:
    start, end = span.offsets if isinstance(span, TextSpan) else span
    return MentionKey(QUESTION, "explicit", start, end)


def passage_key(mention: PassageMention | RawMention) -> MentionKey:
    if isinstance(mention, RawMention):
        return MentionKey(PASSAGE, mention.kind, mention.start, mention.end, mention.preposition or "")
    if isinstance(mention, ExplicitMention):
        return MentionKey(PASSAGE, "explicit", mention.span.start, mention.span.end)
    if isinstance(mention, ImplicitPhraseMention):
        return MentionKey(PASSAGE, "implicit_phrase", mention.anchor.start, mention.anchor.end, mention.preposition)
    if isinstance(mention, ImplicitSentenceMention):
        return MentionKey(PASSAGE, "implicit_sentence", preposition=mention.preposition)
    assert isinstance(mention, TitleMention)
    return MentionKey(PASSAGE, "title", mention.span.start, mention.span.end)


def canonical_key(key: MentionKey, policy: EvalPolicy) -> MentionKey:
    if policy.title_equivalence and key.side == PASSAGE and key.kind in _IMPLICIT_FAMILY:
        return MentionKey(PASSAGE, "implicit")
    return key


Pair = tuple[MentionKey, MentionKey]


def equality_sets(
    expl: Explanation | RawExplanation | None, policy: EvalPolicy
) -> tuple[frozenset[MentionKey], frozenset[Pair]]:
    """Deduplicated mention set and alignment-pair set of one explanation."""
    if expl is None:
        return frozenset(), frozenset()
    mentions: set[MentionKey] = set()
    pairs: set[Pair] = set()
    if isinstance(expl, Explanation):
        items = [(question_key(eq.question_span), passage_key(eq.passage_mention)) for eq in expl.equalities]
    else:
        items = [(question_key(eq.question), passage_key(eq.mention)) for eq in expl.equalities]
    for q, p in items:
        p = canonical_key(p, policy)
        mentions.add(q)
        mentions.add(p)
        pairs.add((q, p))
    return frozenset(mentions), frozenset(pairs)


# --------------------------------------------------------------------------
# precision / recall / F1


def _prf_fractions(matched: int, pred_total: int, gold_total: int) -> tuple[Fraction, Fraction, Fraction]:
    """Zero-denominator convention: 1 when both sets are empty, 0 when only
    the denominator set is."""
    if pred_total == 0:
        p = Fraction(1) if gold_total == 0 else Fraction(0)
    else:
        p = Fraction(matched, pred_total)
    if gold_total == 0:
        r = Fraction(1) if pred_total == 0 else Fraction(0)
    else:
        r = Fraction(matched, gold_total)
    f1 = Fraction(0) if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1


def mention_identification_prf(
    gold: Iterable[MentionKey], pred: Iterable[MentionKey], policy: EvalPolicy = EvalPolicy()
) -> tuple[float, float, float]:
    """Set precision/recall/F1 over individual mentions (values in [0, 1])."""
    g = {canonical_key(k, policy) for k in gold}
    p = {canonical_key(k, policy) for k in pred}
    prf = _prf_fractions(len(g & p), len(p), len(g))
    return tuple(float(x) for x in prf)


def mention_alignment_prf(
    gold: Iterable[Pair], pred: Iterable[Pair], policy: EvalPolicy = EvalPolicy()
) -> tuple[float, float, float]:
    """Set precision/recall/F1 over full equality pairs (values in [0, 1])."""
    g = {(q, canonical_key(m, policy)) for q, m in gold}
    p = {(q, canonical_key(m, policy)) for q, m in pred}
    prf = _prf_fractions(len(g & p), len(p), len(g))
    return tuple(float(x) for x in prf)


# --------------------------------------------------------------------------
# corpus-level reports


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


@dataclass(frozen=True)
class MetricCounts:
    gold_mentions: int
    pred_mentions: int
    matched_mentions: int
    gold_pairs: int
    pred_pairs: int
    matched_pairs: int
    examples: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass(frozen=True)
class MetricReport:
    mention_id: PRF
    alignment: PRF
    counts: MetricCounts
    answer_accuracy: float | None = None

    def to_dict(self) -> dict:
        out = {
            "mention_identification": self.mention_id.to_dict(),
            "mention_alignment": self.alignment.to_dict(),
            "counts": self.counts.to_dict(),
        }
        if self.answer_accuracy is not None:
            out["answer_accuracy"] = self.answer_accuracy
        return out


def _percent(x: Fraction) -> float:
    return float(x * 100)


@dataclass
class _ExampleScore:
    gold_mentions: int
    pred_mentions: int
    matched_mentions: int
    gold_pairs: int
    pred_pairs: int
    matched_pairs: int
    answer_correct: bool


def _score_examples(
    gold: CorpusDocument,
    preds: Sequence[PredictionRecord] | PredictionDocument,
    policy: EvalPolicy,
) -> list[_ExampleScore]:
    records = preds.records if isinstance(preds, PredictionDocument) else list(preds)
    gold_ids: set[str] = set()
    for ex in gold.examples:
        if ex.id in gold_ids:
            raise DuplicateIdError(f"gold corpus contains id {ex.id!r} twice")
        gold_ids.add(ex.id)
    by_id: dict[str, PredictionRecord] = {}
    for rec in records:
        if rec.example_id in by_id:
            raise DuplicateIdError(f"duplicate prediction for id {rec.example_id!r}")
        if rec.example_id not in gold_ids:
            raise UnknownIdError(f"prediction id {rec.example_id!r} not in gold corpus")
        by_id[rec.example_id] = rec

    scores = []
    for ex in gold.examples:
        if ex.label is not ExplanationLabel.VALID_EXPLANATION or ex.explanation is None:
            continue
        gset, gpairs = equality_sets(ex.explanation, policy)
        rec = by_id.get(ex.id)
        pset, ppairs = equality_sets(rec.predicted_explanation if rec else None, policy)
        matched_pairs = gpairs & ppairs
        matched_mentions = gset & pset
        # A matched pair entails both its mentions matching.
        for q, p in matched_pairs:
            assert q in matched_mentions and p in matched_mentions
        gold_answers = {a.answer_span.offsets for a in ex.explanation.answers}
        pred_answers: set[tuple[int, int]] = set()
        if rec is not None:
            if rec.predicted_answer_spans is not None:
                pred_answers = set(rec.predicted_answer_spans)
            elif rec.predicted_explanation is not None:
                pred_answers = {span for span, _ in rec.predicted_explanation.answers}
        scores.append(
            _ExampleScore(
                len(gset), len(pset), len(matched_mentions),
                len(gpairs), len(ppairs), len(matched_pairs),
                answer_correct=pred_answers == gold_answers,
            )
        )
    return scores


def _aggregate(scores: list[_ExampleScore], policy: EvalPolicy, with_answers: bool) -> MetricReport:
    counts = MetricCounts(
        gold_mentions=sum(s.gold_mentions for s in scores),
        pred_mentions=sum(s.pred_mentions for s in scores),
        matched_mentions=sum(s.matched_mentions for s in scores),
        gold_pairs=sum(s.gold_pairs for s in scores),
        pred_pairs=sum(s.pred_pairs for s in scores),
        matched_pairs=sum(s.matched_pairs for s in scores),
        examples=len(scores),
    )
    if policy.averaging == "micro":
        mp, mr, mf = _prf_fractions(counts.matched_mentions, counts.pred_mentions, counts.gold_mentions)
        ap, ar, af = _prf_fractions(counts.matched_pairs, counts.pred_pairs, counts.gold_pairs)
    elif policy.averaging == "macro":
        mp, mr, mf = _macro(scores, lambda s: (s.matched_mentions, s.pred_mentions, s.gold_mentions))
        ap, ar, af = _macro(scores, lambda s: (s.matched_pairs, s.pred_pairs, s.gold_pairs))
    else:
        raise ValueError(f"unknown averaging mode {policy.averaging!r}")
    accuracy = None
    if with_answers:
        accuracy = _percent(
            Fraction(sum(1 for s in scores if s.answer_correct), len(scores)) if scores else Fraction(1)
        )
    return MetricReport(
        mention_id=PRF(_percent(mp), _percent(mr), _percent(mf)),
        alignment=PRF(_percent(ap), _percent(ar), _percent(af)),
        counts=counts,
        answer_accuracy=accuracy,
    )


def _macro(scores: list[_ExampleScore], pick) -> tuple[Fraction, Fraction, Fraction]:
    if not scores:
        return Fraction(1), Fraction(1), Fraction(1)
    totals = [Fraction(0), Fraction(0)]
    for s in scores:
        p, r, _ = _prf_fractions(*pick(s))
        totals[0] += p
        totals[1] += r
    p = totals[0] / len(scores)
    r = totals[1] / len(scores)
    f1 = Fraction(0) if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1


def evaluate_task1(
    gold: CorpusDocument,
    preds: Sequence[PredictionRecord] | PredictionDocument,
    policy: EvalPolicy = EvalPolicy(),
) -> MetricReport:
    """Score explanation predictions against gold (answers are given).

    Only gold examples labeled valid_explanation are scored; an example
    with no prediction contributes its gold counts with zero matches.
    Raises UnknownIdError / DuplicateIdError for id problems.
    """
    return _aggregate(_score_examples(gold, preds, policy), policy, with_answers=False)


def evaluate_task2(
    gold: CorpusDocument,
    preds: Sequence[PredictionRecord] | PredictionDocument,
    policy: EvalPolicy = EvalPolicy(),
) -> MetricReport:
    """Task-1 metrics plus exact-set answer accuracy.

    A prediction's answer span set (the ``answers`` field, or the answer
    spans of its explanation) must equal the gold answer span set exactly.
    """
    return _aggregate(_score_examples(gold, preds, policy), policy, with_answers=True)


# --------------------------------------------------------------------------
# agreement between annotators


def classification_accuracy(gold_a: CorpusDocument, gold_b: CorpusDocument) -> float:
    """Percentage of shared ids on which the category labels agree."""
    a = {ex.id: ex.label for ex in gold_a.examples}
    b = {ex.id: ex.label for ex in gold_b.examples}
    if set(a) != set(b):
        only_a = sorted(set(a) - set(b))[:3]
        only_b = sorted(set(b) - set(a))[:3]
        raise IdMismatchError(f"id sets differ (e.g. only-left {only_a}, only-right {only_b})")
    if not a:
        return 100.0
    agree = sum(1 for ex_id, label in a.items() if b[ex_id] is label)
    return _percent(Fraction(agree, len(a)))


@dataclass(frozen=True)
class PairAgreement:
    annotator_a: str
    annotator_b: str
    classification_accuracy: float
    identification_f1: float
    alignment_f1: float
    shared_valid: int


@dataclass(frozen=True)
class AgreementReport:
    pairs: tuple[PairAgreement, ...]
    mean_classification_accuracy: float
    mean_identification_f1: float
    mean_alignment_f1: float

    def to_dict(self) -> dict:
        return {
            "pairs": [p.__dict__.copy() for p in self.pairs],
            "mean_classification_accuracy": self.mean_classification_accuracy,
            "mean_identification_f1": self.mean_identification_f1,
            "mean_alignment_f1": self.mean_alignment_f1,
        }


def pairwise_agreement(
    corpora: Sequence[CorpusDocument],
    names: Sequence[str] | None = None,
    policy: EvalPolicy = EvalPolicy(),
) -> AgreementReport:
    """Agreement over every unordered annotator pair.

    Classification accuracy uses all shared ids; identification and
    alignment F1 pool counts over the ids both annotators labeled
    valid_explanation (F1 is symmetric under exact matching, so one value
    per pair). Also reports unweighted means over pairs.
    """
    if len(corpora) < 2:
        raise ValueError("pairwise agreement requires at least two annotators")
    if names is None:
        names = [doc.provenance or f"annotator{i}" for i, doc in enumerate(corpora)]
    pairs = []
    for i in range(len(corpora)):
        for j in range(i + 1, len(corpora)):
            a, b = corpora[i], corpora[j]
            acc = classification_accuracy(a, b)
            a_valid = {ex.id: ex for ex in a.examples if ex.label is ExplanationLabel.VALID_EXPLANATION}
            b_valid = {ex.id: ex for ex in b.examples if ex.label is ExplanationLabel.VALID_EXPLANATION}
            shared = sorted(set(a_valid) & set(b_valid))
            gm = pm = mm = gp = pp = mp_ = 0
            for ex_id in shared:
                gset, gpairs = equality_sets(a_valid[ex_id].explanation, policy)
                pset, ppairs = equality_sets(b_valid[ex_id].explanation, policy)
                gm += len(gset)
                pm += len(pset)
                mm += len(gset & pset)
                gp += len(gpairs)
                pp += len(ppairs)
                mp_ += len(gpairs & ppairs)
            _, _, ident_f1 = _prf_fractions(mm, pm, gm)
            _, _, align_f1 = _prf_fractions(mp_, pp, gp)
            pairs.append(
                PairAgreement(
                    names[i], names[j], acc, _percent(ident_f1), _percent(align_f1), len(shared)
                )
            )
    n = len(pairs)
    return AgreementReport(
        pairs=tuple(pairs),
        mean_classification_accuracy=sum(p.classification_accuracy for p in pairs) / n,
        mean_identification_f1=sum(p.identification_f1 for p in pairs) / n,
        mean_alignment_f1=sum(p.alignment_f1 for p in pairs) / n,
    )


# --------------------------------------------------------------------------
# plain-text rendering


def format_report_table(report: MetricReport, name: str = "predictions") -> str:
    """Aligned table with identification/alignment blocks, one system row."""
    headers = ["", "Mention Identification", "Mention Alignment"]
    sub = ["", "P      R      F1", "P      R      F1"]
    row = [
        name,
        f"{report.mention_id.precision:5.1f}  {report.mention_id.recall:5.1f}  {report.mention_id.f1:5.1f}",
        f"{report.alignment.precision:5.1f}  {report.alignment.recall:5.1f}  {report.alignment.f1:5.1f}",
    ]
    if report.answer_accuracy is not None:
        headers.append("Answer Acc.")
        sub.append("")
        row.append(f"{report.answer_accuracy:5.1f}")
    width = max(len(name), 12)
    lines = []
    for cells in (headers, sub, row):
        first, rest = cells[0], cells[1:]
        lines.append((first.ljust(width) + "   " + "   ".join(c.ljust(21) for c in rest)).rstrip())
    return "\n".join(lines) + "\n"
