from dataclasses import replace

import pytest

from mutations import build_mutations
from qedkit.errors import NotExplainedError
from qedkit.model import (
    ExplanationLabel,
    TextSpan,
    resolve_answer,
    sentence_containing,
    validate_example,
)


def test_michigan_is_valid(michigan_example):
    assert validate_example(michigan_example).codes() == []


def test_all_fixtures_pass_at_error_level(fixture_corpus):
    for ex in fixture_corpus:
        report = validate_example(ex)
        assert report.is_valid, (ex.id, report.codes())


def test_title_mention_warns_in_gold_only(title_link_example):
    gold = validate_example(title_link_example)
    assert gold.codes() == ["TITLE_LINK_IN_GOLD"]
    assert gold.is_valid
    pred = validate_example(title_link_example, context="prediction")
    assert pred.codes() == []


@pytest.mark.parametrize("case", range(15))
def test_single_field_corruptions(case, michigan_example, got_talent_example, no_answer_example):
    mutations = build_mutations(michigan_example, got_talent_example, no_answer_example)
    name, mutated, code, severity = mutations[case]
    report = validate_example(mutated)
    assert report.codes() == [code], (name, report.codes())
    assert report.violations[0].severity == severity, name


def test_mutation_suite_size(michigan_example, got_talent_example, no_answer_example):
    assert len(build_mutations(michigan_example, got_talent_example, no_answer_example)) >= 10


def test_violation_ordering_is_by_field_then_offset(michigan_example):
    expl = michigan_example.explanation
    eq = expl.equalities[0]
    corrupted = replace(
        michigan_example,
        explanation=replace(
            expl,
            equalities=(
                replace(eq, question_span=replace(eq.question_span, text="nope")),
                replace(eq, question_span=TextSpan(9, 3, "x")),
            ),
            answers=(replace(expl.answers[0], answer_span=TextSpan(0, 10_000, "x")),),
        ),
    )
    report = validate_example(corrupted)
    fields = [v.field for v in report]
    assert fields == sorted(fields, key=lambda f: (f.replace("[", "."), ))
    assert report.codes() == ["SPAN_OUT_OF_BOUNDS", "SPAN_TEXT_MISMATCH", "INVALID_SPAN"]


def test_resolve_answer_wimbledon(wimbledon_example):
    assert resolve_answer(wimbledon_example) == ["Simona Halep"]


def test_resolve_answer_identity(michigan_example):
    assert resolve_answer(michigan_example) == ["107,601"]


def test_resolve_answer_preserves_order(acme_example):
    assert resolve_answer(acme_example) == ["Ann Lee", "Bo Chen"]


def test_resolve_answer_requires_explanation(answer_only_example):
    with pytest.raises(NotExplainedError):
        resolve_answer(answer_only_example)


def test_sentence_containing(michigan_example):
    span = michigan_example.explanation.answers[0].answer_span
    sentence = sentence_containing(michigan_example, span)
    assert sentence is michigan_example.sentence_boundaries[2]
    crossing = TextSpan(0, len(michigan_example.passage), michigan_example.passage)
    assert sentence_containing(michigan_example, crossing) is None


def test_label_categories():
    assert ExplanationLabel.VALID_EXPLANATION.category == 1
    assert ExplanationLabel.ANSWER_ONLY.category == 2
    assert ExplanationLabel.NO_ANSWER.category == 3
