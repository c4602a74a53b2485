from dataclasses import replace

import pytest

from conftest import join_sentences
from qedkit.analysis import (
    ExpressionType,
    TYPE_ORDER,
    build_stats,
    classify_expression,
    exact_match_rate,
    expression_type_crosstab,
    format_stats_tables,
    label_counts,
    link_count_distribution,
)
from qedkit.corpus import CorpusDocument
from qedkit.model import (
    AnswerAnnotation,
    Explanation,
    ExplanationLabel,
    ExplicitMention,
    ImplicitSentenceMention,
    QedExample,
    ReferentialEquality,
    SentenceSpan,
    TextSpan,
)


def _doc(examples):
    return CorpusDocument(list(examples), "<test>", [])


def test_label_counts(fixture_corpus):
    counts = label_counts(_doc(fixture_corpus))
    assert counts[ExplanationLabel.VALID_EXPLANATION] == 7
    assert counts[ExplanationLabel.ANSWER_ONLY] == 1
    assert counts[ExplanationLabel.NO_ANSWER] == 1


def test_label_counts_empty_corpus():
    counts = label_counts(_doc([]))
    assert all(v == 0 for v in counts.values())
    assert set(counts) == set(ExplanationLabel)


def test_link_distribution_single_example(wimbledon_example):
    assert link_count_distribution(_doc([wimbledon_example])) == {2: 1}


def test_link_distribution_matches_hand_tally(fixture_corpus):
    hist = link_count_distribution(_doc(fixture_corpus))
    tally = {}
    for ex in fixture_corpus:
        if ex.label is ExplanationLabel.VALID_EXPLANATION:
            k = len(ex.explanation.equalities)
            tally[k] = tally.get(k, 0) + 1
    assert hist == tally
    assert sum(hist.values()) == 7


def test_exact_match_rate_wimbledon(wimbledon_example):
    assert exact_match_rate(_doc([wimbledon_example])) == 1.0


def test_exact_match_rate_michigan(michigan_example):
    assert exact_match_rate(_doc([michigan_example])) == 0.0


def test_exact_match_rate_mixes_and_implicit_counts_as_non_match(
    wimbledon_example, michigan_example, got_talent_example
):
    rate = exact_match_rate(_doc([wimbledon_example, michigan_example, got_talent_example]))
    assert rate == pytest.approx(2 / 4)


def test_exact_match_rate_whitespace_invariant():
    question = "when did the big house open"
    sentences = ["The  Big   House opened in 1927."]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "1927")
    ex = QedExample(
        id="ws",
        title="Big House",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=Explanation(
            SentenceSpan(boundaries[0]),
            (
                ReferentialEquality(
                    TextSpan.of(question, "the big house"),
                    ExplicitMention(TextSpan.of(passage, "The  Big   House")),
                ),
            ),
            (AnswerAnnotation(answer, answer),),
        ),
    )
    assert exact_match_rate(_doc([ex])) == 1.0


def test_exact_match_rate_empty():
    assert exact_match_rate(_doc([])) == 0.0


# -- expression typing --------------------------------------------------------


def test_pronoun(michigan_example):
    mention = michigan_example.explanation.equalities[0].passage_mention
    assert classify_expression("Its", mention, michigan_example) is ExpressionType.PRONOUN


def test_definite_non_anaphoric(michigan_example):
    surface = "the CBS television sitcom How I Met Your Mother"
    span = TextSpan(0, len(surface), surface)
    assert classify_expression(surface, span, michigan_example) is ExpressionType.DEF_NON_ANAPHORIC


def test_definite_anaphoric_prior_mention(got_talent_example):
    # "the winner" anchored in sentence 2 does not recur earlier; fabricate
    # a passage-side mention whose head occurred before.
    question = "who was the winner of the cup"
    sentences = ["The winner of the cup was announced.", "The winner smiled."]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "smiled")
    mention = ExplicitMention(TextSpan.of(passage, "The winner", occurrence=1))
    ex = QedExample(
        id="ana",
        title="Cup",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=Explanation(
            SentenceSpan(boundaries[1]),
            (ReferentialEquality(TextSpan.of(question, "the winner"), mention),),
            (AnswerAnnotation(answer, answer),),
        ),
    )
    assert classify_expression("The winner", mention, ex) is ExpressionType.DEF_ANAPHORIC
    # Question-side definites have no prior passage context.
    q_span = TextSpan.of(question, "the winner")
    assert classify_expression("the winner", q_span, ex) is ExpressionType.DEF_NON_ANAPHORIC


def test_bridge_variants(world_series_example):
    assert (
        classify_expression("", ImplicitSentenceMention("at"), world_series_example)
        is ExpressionType.BRIDGE
    )
    got = world_series_example  # any example works as context


def test_proper_names(michigan_example):
    span = TextSpan(0, 10, "Mount Fuji")
    assert classify_expression("Mount Fuji", span, michigan_example) is ExpressionType.PROPER
    # lowercase question phrase matching title tokens
    q = TextSpan(0, 7, "stadium")
    assert classify_expression("stadium", q, michigan_example) is ExpressionType.PROPER


def test_generics(michigan_example):
    span = TextSpan(0, 11, "a dead zone")
    assert classify_expression("a dead zone", span, michigan_example) is ExpressionType.GENERIC
    plural = TextSpan(0, 10, "dead zones")
    assert classify_expression("dead zones", plural, michigan_example) is ExpressionType.GENERIC


def test_misc(michigan_example):
    span = TextSpan(0, 5, "seven")
    assert classify_expression("seven", span, michigan_example) is ExpressionType.MISC


def test_classify_is_deterministic(fixture_corpus):
    for ex in fixture_corpus:
        if ex.explanation is None:
            continue
        for eq in ex.explanation.equalities:
            first = classify_expression(eq.question_span.text, eq.question_span, ex)
            second = classify_expression(eq.question_span.text, eq.question_span, ex)
            assert first is second


# -- crosstab ------------------------------------------------------------------


def test_crosstab_single_equality(wimbledon_example):
    ct = expression_type_crosstab(_doc([wimbledon_example]), sample_size=1, seed=3)
    assert ct.total == 1
    nonzero = [(i, j) for i, row in enumerate(ct.matrix) for j, v in enumerate(row) if v]
    assert len(nonzero) == 1


def test_crosstab_matches_hand_assignment(fixture_corpus):
    doc = _doc(fixture_corpus)
    ct = expression_type_crosstab(doc, sample_size=100, seed=0)
    expected = {}
    for ex in fixture_corpus:
        if ex.label is not ExplanationLabel.VALID_EXPLANATION:
            continue
        for eq in ex.explanation.equalities:
            q = classify_expression(eq.question_span.text, eq.question_span, ex)
            from qedkit.analysis import _mention_surface

            p = classify_expression(_mention_surface(eq.passage_mention), eq.passage_mention, ex)
            expected[(q, p)] = expected.get((q, p), 0) + 1
    index = {t: i for i, t in enumerate(TYPE_ORDER)}
    for (q, p), count in expected.items():
        assert ct.matrix[index[q]][index[p]] == count
    assert ct.total == sum(expected.values())


def test_crosstab_sampling_is_deterministic(fixture_corpus):
    doc = _doc(fixture_corpus)
    a = expression_type_crosstab(doc, sample_size=3, seed=42)
    b = expression_type_crosstab(doc, sample_size=3, seed=42)
    assert a == b
    assert a.total == 3


def test_stats_report_reconciles(fixture_corpus):
    report = build_stats(_doc(fixture_corpus), sample_size=100, seed=0)
    assert sum(report.link_histogram.values()) == report.label_counts[ExplanationLabel.VALID_EXPLANATION]
    total_equalities = sum(k * v for k, v in report.link_histogram.items())
    assert report.crosstab.total == min(100, total_equalities)
    assert 0.0 <= report.exact_match_rate <= 1.0
    text = format_stats_tables(report)
    assert "valid_explanation" in text
    assert "Qu\\Ps" in text
