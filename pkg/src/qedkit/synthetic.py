"""Seeded synthetic data: corpora, perturbed predictions, judgment logs.

Everything here is deterministic given the seed. The corpus generator
produces structurally valid examples with controllable label counts, a
link-count distribution whose mode is one equality, and an exact-match
rate targeted at roughly 12% of equalities, so corpus-level statistics
can be asserted against known values without the released dataset.
"""

from __future__ import annotations

import random
from dataclasses import replace

from .corpus import (
    CorpusDocument,
    PredictionRecord,
    RawEquality,
    RawExplanation,
    RawMention,
    raw_from_explanation,
)
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
from .rater import Condition, JudgedErrorType, JudgmentRecord
from .text import word_spans

_ADJECTIVES = [
    "red", "amber", "silver", "quiet", "northern", "ancient", "bright",
    "hollow", "green", "iron", "eastern", "golden", "stone", "winding",
]
_NOUNS = [
    "tower", "harbor", "festival", "bridge", "museum", "garden", "station",
    "library", "market", "canal", "orchard", "theatre", "mill", "quarry",
]
_NAMES = [
    "Ana Torres", "Liam Ortega", "Mira Patel", "Jonas Weber", "Sofia Marino",
    "Elena Brandt", "Noah Fischer", "Ivy Lennox", "Omar Haddad", "Tessa Brook",
]
_PREPS = ["of", "in", "at", "on", "by", "for", "from", "to", "with", "during"]

# Per-equality mention mix: exact explicit / alias explicit / implicit.
_EXACT_P = 0.12
_IMPLICIT_PHRASE_P = 0.08
_IMPLICIT_SENTENCE_P = 0.07
_LINK_WEIGHTS = {0: 5, 1: 66, 2: 26, 3: 3}


def _combo(rng: random.Random, used: set[tuple[str, str]]) -> tuple[str, str]:
    while True:
        combo = (rng.choice(_ADJECTIVES), rng.choice(_NOUNS))
        if combo not in used:
            used.add(combo)
            return combo


def _build_valid_example(rng: random.Random) -> QedExample:
    used: set[tuple[str, str]] = set()
    k = rng.choices(list(_LINK_WEIGHTS), weights=list(_LINK_WEIGHTS.values()))[0]
    kinds = []
    for _ in range(k):
        roll = rng.random()
        if roll < _EXACT_P:
            kinds.append("exact")
        elif roll < _EXACT_P + _IMPLICIT_PHRASE_P:
            kinds.append("implicit_phrase")
        elif roll < _EXACT_P + _IMPLICIT_PHRASE_P + _IMPLICIT_SENTENCE_P:
            kinds.append("implicit_sentence")
        else:
            kinds.append("alias")

    name = rng.choice(_NAMES)
    second_name = rng.choice([n for n in _NAMES if n != name])
    year = rng.randint(1900, 2020)
    multi_answer = rng.random() < 0.05

    # Exact-match entities are article-free proper-name style ("amber tower"
    # in the question, "Amber Tower" in the passage) so they normalize equal
    # and are reachable by content-word n-gram matching; aliases are definite
    # NPs with no surface relation between the two sides.
    q_forms: list[str] = []
    p_forms: list[str | None] = []
    for kind in kinds:
        adj, noun = _combo(rng, used)
        if kind == "exact":
            q_forms.append(f"{adj} {noun}")
            p_forms.append(f"{adj.title()} {noun.title()}")
        elif kind == "alias":
            q_forms.append(f"the {adj} {noun}")
            alias_adj, alias_noun = _combo(rng, used)
            p_forms.append(f"the {alias_adj} {alias_noun}")
        else:
            q_forms.append(f"the {adj} {noun}")
            p_forms.append(None)

    explicit_forms = [f for f in p_forms if f is not None]
    subject = explicit_forms[0] if explicit_forms else "the council"
    subject_cap = subject[0].upper() + subject[1:]
    clause = ""
    if len(explicit_forms) > 1:
        clause = " near " + " and ".join(explicit_forms[1:])
    anchor_clause = " during the gathering" if "implicit_phrase" in kinds else ""
    if multi_answer:
        tail = f", and {name} with {second_name} kept the record in {year}."
    else:
        tail = f", and {name} kept the record in {year}."
    sentence = f"{subject_cap} drew crowds{clause}{anchor_clause}{tail}"

    fillers = [
        "The archives note little else.",
        f"Visitors returned in {year + 1}.",
        "Local records were kept on paper.",
    ]
    sents = []
    if rng.random() < 0.6:
        sents.append(rng.choice(fillers))
    selected_index = len(sents)
    sents.append(sentence)
    if rng.random() < 0.4:
        sents.append(rng.choice(fillers))
    passage = " ".join(sents)
    boundaries = []
    pos = 0
    for s in sents:
        boundaries.append(TextSpan.from_host(passage, pos, pos + len(s)))
        pos += len(s) + 1
    sent_span = boundaries[selected_index]

    question = "who kept the record"
    if q_forms:
        question += " for " + " and ".join(q_forms)
    question += f" in {year}"

    equalities = []
    search_from = sent_span.start
    for kind, q_form, p_form in zip(kinds, q_forms, p_forms):
        q_span = TextSpan.of(question, q_form)
        if kind in ("exact", "alias"):
            assert p_form is not None
            target = p_form if passage.find(p_form, search_from) != -1 else p_form[0].upper() + p_form[1:]
            start = passage.index(target, search_from)
            mention = ExplicitMention(TextSpan.from_host(passage, start, start + len(target)))
        elif kind == "implicit_phrase":
            start = passage.index("the gathering", sent_span.start)
            mention = ImplicitPhraseMention(
                TextSpan.from_host(passage, start, start + len("the gathering")), rng.choice(_PREPS)
            )
        else:
            mention = ImplicitSentenceMention(rng.choice(_PREPS))
        equalities.append(ReferentialEquality(q_span, mention))

    answer_spans = [TextSpan.of(passage, name, passage[: sent_span.start].count(name))]
    if multi_answer:
        answer_spans.append(TextSpan.of(passage, second_name, passage[: sent_span.start].count(second_name)))
    answers = tuple(AnswerAnnotation(span, span) for span in answer_spans)

    return QedExample(
        id="",
        title=subject_cap.removeprefix("The ").title() if explicit_forms else "Town Records",
        question=question,
        passage=passage,
        sentence_boundaries=tuple(boundaries),
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=Explanation(SentenceSpan(sent_span), tuple(equalities), answers),
        url=f"https://example.org/{rng.randrange(10**6)}" if rng.random() < 0.3 else None,
    )


def _build_answer_only_example(rng: random.Random) -> QedExample:
    name = rng.choice(_NAMES)
    year = rng.randint(1900, 2020)
    s1 = f"The committee met in {year}."
    s2 = f"Several sources credit {name} for the outcome."
    passage = f"{s1} {s2}"
    boundaries = (
        TextSpan.from_host(passage, 0, len(s1)),
        TextSpan.from_host(passage, len(s1) + 1, len(passage)),
    )
    return QedExample(
        id="",
        title="Committee Notes",
        question=f"who was credited for the outcome of the {rng.choice(_NOUNS)} review",
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.ANSWER_ONLY,
        answer_spans=(TextSpan.of(passage, name),),
    )


def _build_no_answer_example(rng: random.Random) -> QedExample:
    year = rng.randint(1900, 2020)
    s1 = f"The {rng.choice(_ADJECTIVES)} {rng.choice(_NOUNS)} closed in {year}."
    s2 = "No further details survive."
    passage = f"{s1} {s2}"
    boundaries = (
        TextSpan.from_host(passage, 0, len(s1)),
        TextSpan.from_host(passage, len(s1) + 1, len(passage)),
    )
    return QedExample(
        id="",
        title="Lost Records",
        question=f"who rebuilt the {rng.choice(_NOUNS)}",
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.NO_ANSWER,
    )


def synthetic_corpus(
    counts: tuple[int, int, int] = (762, 160, 78),
    seed: int = 13,
    provenance: str = "<synthetic>",
) -> CorpusDocument:
    """Corpus with exactly ``counts`` examples per category (1, 2, 3)."""
    rng = random.Random(seed)
    examples = [_build_valid_example(rng) for _ in range(counts[0])]
    examples += [_build_answer_only_example(rng) for _ in range(counts[1])]
    examples += [_build_no_answer_example(rng) for _ in range(counts[2])]
    rng.shuffle(examples)
    examples = [replace(ex, id=f"synth-{i:04d}") for i, ex in enumerate(examples)]
    return CorpusDocument(examples, provenance, [])


def synthetic_predictions(
    corpus: CorpusDocument,
    seed: int = 17,
    drop: float = 0.3,
    add: float = 0.35,
    miss: float = 0.1,
    answer_noise: float = 0.25,
) -> list[PredictionRecord]:
    """Gold explanations perturbed into plausible imperfect predictions.

    Drops equalities, fabricates spurious ones (explicit, implicit, and
    title mentions all occur, so matching policies get exercised), omits
    some predictions entirely, and perturbs answer spans.
    """
    rng = random.Random(seed)
    out = []
    for ex in corpus.examples:
        if ex.label is not ExplanationLabel.VALID_EXPLANATION or ex.explanation is None:
            continue
        if rng.random() < miss:
            continue
        gold = raw_from_explanation(ex.explanation)
        kept = [eq for eq in gold.equalities if rng.random() >= drop]
        q_words = word_spans(ex.question)
        sent = gold.sentence
        while len(kept) < 4 and rng.random() < add:
            if gold.equalities and rng.random() < 0.5:
                q_off = rng.choice(gold.equalities).question
            else:
                i = rng.randrange(len(q_words))
                j = min(len(q_words) - 1, i + rng.randrange(3))
                q_off = (q_words[i][0], q_words[j][1])
            roll = rng.random()
            if roll < 0.4:
                a = rng.randrange(sent[0], sent[1] - 1)
                b = rng.randrange(a + 1, min(sent[1], a + 12) + 1)
                mention = RawMention("explicit", a, b)
            elif roll < 0.6:
                a = rng.randrange(sent[0], sent[1] - 1)
                mention = RawMention("implicit_phrase", a, a + 3, rng.choice(_PREPS))
            elif roll < 0.8:
                mention = RawMention("implicit_sentence", preposition=rng.choice(_PREPS))
            else:
                mention = RawMention("title", 0, max(1, min(4, len(ex.title))))
            kept.append(RawEquality(q_off, mention))
        rng.shuffle(kept)

        answers = [a.answer_span.offsets for a in ex.explanation.answers]
        if rng.random() < answer_noise:
            a0, a1 = answers[0]
            answers[0] = (a0 + 1, a1 + 1)
        raw_answers = tuple((span, span) for span in answers)
        if rng.random() < 0.5:
            record = PredictionRecord(
                ex.id,
                ExplanationLabel.VALID_EXPLANATION,
                RawExplanation(sent, tuple(kept), raw_answers),
            )
        else:
            record = PredictionRecord(
                ex.id,
                ExplanationLabel.VALID_EXPLANATION,
                RawExplanation(sent, tuple(kept), ()),
                predicted_answer_spans=tuple(answers),
            )
        out.append(record)
    return out


def synthetic_judgment_log(
    seed: int = 7,
    n_raters: int = 9,
    n_instances: int = 12,
    p_judge: float = 0.8,
) -> list[JudgmentRecord]:
    """A consistent random judging log spanning all three conditions."""
    rng = random.Random(seed)
    instances = []
    for i in range(n_instances):
        correct = rng.random() < 0.5
        error = None if correct else rng.choice(list(JudgedErrorType))
        instances.append((f"inst-{i:02d}", correct, error))
    records = []
    conditions = list(Condition)
    for j in range(n_raters):
        condition = conditions[j % len(conditions)]
        for instance_id, correct, error in instances:
            if rng.random() > p_judge:
                continue
            # Raters over-trust shown answers: high accuracy on correct
            # instances, below chance on incorrect ones.
            verdict = rng.random() < (0.9 if correct else 0.55)
            records.append(
                JudgmentRecord(
                    rater_id=f"r{j:02d}",
                    instance_id=instance_id,
                    condition=condition,
                    instance_correct=correct,
                    verdict=verdict,
                    error_type=error,
                    confidence=rng.choice([None, 1, 2, 3, 4, 5]),
                )
            )
    if not records:
        records.append(
            JudgmentRecord("r00", "inst-00", Condition.NONE, True, True)
        )
    return records
