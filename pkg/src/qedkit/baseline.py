"""Deterministic lexical explanation baseline.

Given a question, a passage, and the gold answer span(s), selects the
sentence containing the first answer and aligns question n-grams to it by
normalized exact string match. A floor baseline and an end-to-end
exerciser for the evaluation pipeline; alignment recall is inherently
bounded by how often the two sides of an equality match as strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import PredictionRecord, RawEquality, RawExplanation, RawMention
from .errors import NoSentenceError, NotExplainedError
from .model import ExplanationLabel, QedExample, TextSpan
from .text import normalize_text, word_spans

#: Function words plus frequent question predicates ("who won x", "who
#: wrote y"); keeps candidate n-grams noun-phrase-like. Matching a light
#: verb between question and sentence says nothing about reference.
FUNCTION_WORDS = frozenset(
    """the a an of in on at by for from to with during and or but nor not no
    as is are was were be been being am do does did done have has had having
    can could will would shall should may might must who whom whose what
    which when where why how that this these those it its he his him she her
    they their them there here about into over under between through after
    before above below up down out off again once than then too very only
    own same such both each few more most other some any all s t""".split()
)
LIGHT_VERBS = frozenset(
    """won win wins winning wrote write writes written made make makes making
    said say says got get gets getting came come comes went go goes gone
    play plays played sang sing sings sung called call calls named names
    born died die dies became become becomes took take takes taken gave give
    gives given found founded directed produced created formed started
    starts begin begins began ended end ends happened happens occur occurs
    occurred used use uses using""".split()
)
DEFAULT_STOPWORDS = FUNCTION_WORDS | LIGHT_VERBS


@dataclass(frozen=True)
class BaselineConfig:
    max_len: int = 4
    stopwords: frozenset[str] = DEFAULT_STOPWORDS


def _content_runs(text: str, stopwords: frozenset[str]) -> list[list[tuple[int, int]]]:
    """Maximal runs of consecutive content words, as offset pairs."""
    runs: list[list[tuple[int, int]]] = []
    current: list[tuple[int, int]] = []
    for start, end in word_spans(text):
        if normalize_text(text[start:end]) in stopwords:
            if current:
                runs.append(current)
                current = []
        else:
            current.append((start, end))
    if current:
        runs.append(current)
    return runs


def _answer_spans(example: QedExample) -> list[TextSpan]:
    if example.explanation is not None:
        return [a.answer_span for a in example.explanation.answers]
    if example.answer_spans:
        return list(example.answer_spans)
    return []


def predict_explanation(example: QedExample, config: BaselineConfig = BaselineConfig()) -> PredictionRecord:
    """Predict an explanation for an example whose answer spans are known.

    The selected sentence is the one containing the first answer span
    (NoSentenceError when the span crosses sentence boundaries). Candidate
    question n-grams are runs of up to ``max_len`` consecutive content
    words; each is matched against sentence word windows under
    normalization. Selection is greedy longest-first, ties broken leftmost
    in the question then leftmost in the sentence, and a match may not
    overlap previously selected spans on either side. Every match becomes
    an explicit equality. Deterministic: identical inputs give identical
    predictions.
    """
    answers = _answer_spans(example)
    if not answers:
        raise NotExplainedError(f"example {example.id} has no answer spans to anchor on")
    first = answers[0]
    sentence_span = None
    for b in example.sentence_boundaries:
        if b.start <= first.start and first.end <= b.end:
            sentence_span = b
            break
    if sentence_span is None:
        raise NoSentenceError(f"answer span [{first.start}, {first.end}) of example {example.id} does not lie inside one sentence")

    sentence = example.passage[sentence_span.start : sentence_span.end]
    sentence_words = word_spans(sentence)

    # Sentence windows by word count: normalized text -> leftmost-first offsets.
    windows: dict[int, dict[str, list[tuple[int, int]]]] = {}
    for n in range(1, config.max_len + 1):
        per_n: dict[str, list[tuple[int, int]]] = {}
        for i in range(0, len(sentence_words) - n + 1):
            a = sentence_words[i][0]
            b = sentence_words[i + n - 1][1]
            per_n.setdefault(normalize_text(sentence[a:b]), []).append((a, b))
        windows[n] = per_n

    candidates: list[tuple[int, int, int, int, int]] = []
    for run in _content_runs(example.question, config.stopwords):
        for i in range(len(run)):
            for j in range(i, min(len(run), i + config.max_len)):
                qa, qb = run[i][0], run[j][1]
                n = j - i + 1
                norm = normalize_text(example.question[qa:qb])
                for sa, sb in windows.get(n, {}).get(norm, []):
                    candidates.append((n, qa, qb, sa, sb))

    candidates.sort(key=lambda c: (-c[0], c[1], c[3]))
    used_q: list[tuple[int, int]] = []
    used_s: list[tuple[int, int]] = []
    chosen: list[tuple[int, int, int, int]] = []
    for _, qa, qb, sa, sb in candidates:
        if any(qa < b and a < qb for a, b in used_q):
            continue
        if any(sa < b and a < sb for a, b in used_s):
            continue
        used_q.append((qa, qb))
        used_s.append((sa, sb))
        chosen.append((qa, qb, sa, sb))

    chosen.sort()
    equalities = tuple(
        RawEquality(
            question=(qa, qb),
            mention=RawMention("explicit", sentence_span.start + sa, sentence_span.start + sb),
        )
        for qa, qb, sa, sb in chosen
    )
    if example.explanation is not None:
        raw_answers = tuple(
            (a.answer_span.offsets, a.resolved_span.offsets) for a in example.explanation.answers
        )
    else:
        raw_answers = tuple((a.offsets, a.offsets) for a in answers)
    return PredictionRecord(
        example_id=example.id,
        predicted_label=ExplanationLabel.VALID_EXPLANATION,
        predicted_explanation=RawExplanation(
            sentence=sentence_span.offsets, equalities=equalities, answers=raw_answers
        ),
    )


def predict_corpus(examples, config: BaselineConfig = BaselineConfig()) -> list[PredictionRecord]:
    """Predictions for every valid_explanation example in corpus order."""
    out = []
    for ex in examples:
        if ex.label is ExplanationLabel.VALID_EXPLANATION and ex.explanation is not None:
            out.append(predict_explanation(ex, config))
    return out
