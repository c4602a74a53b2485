"""Shared fixtures: worked examples exercising every mention variant."""

from __future__ import annotations

import pytest

from qedkit.model import (
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
    TitleMention,
)


def join_sentences(sentences: list[str]) -> tuple[str, tuple[TextSpan, ...]]:
    passage = " ".join(sentences)
    boundaries = []
    pos = 0
    for s in sentences:
        boundaries.append(TextSpan.from_host(passage, pos, pos + len(s)))
        pos += len(s) + 1
    return passage, tuple(boundaries)


@pytest.fixture
def michigan_example() -> QedExample:
    question = "how many seats in university of michigan stadium"
    sentences = [
        'Michigan Stadium, nicknamed "The Big House", is the football stadium'
        " for the University of Michigan in Ann Arbor, Michigan.",
        "It is the largest stadium in the United States and the second largest"
        " stadium in the world.",
        "Its official capacity is 107,601.",
    ]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "107,601")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[2]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "university of michigan stadium"),
                ExplicitMention(TextSpan.of(passage, "Its")),
            ),
        ),
        answers=(AnswerAnnotation(answer, answer),),
    )
    return QedExample(
        id="michigan",
        title="Michigan Stadium",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def wimbledon_example() -> QedExample:
    question = "who won wimbledon in 2019"
    sentences = [
        "Simona Halep is a female tennis player.",
        "She won Wimbledon in 2019.",
    ]
    passage, boundaries = join_sentences(sentences)
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[1]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "wimbledon"),
                ExplicitMention(TextSpan.of(passage, "Wimbledon")),
            ),
            ReferentialEquality(
                TextSpan.of(question, "2019"),
                ExplicitMention(TextSpan.of(passage, "2019")),
            ),
        ),
        answers=(
            AnswerAnnotation(TextSpan.of(passage, "She"), TextSpan.of(passage, "Simona Halep")),
        ),
    )
    return QedExample(
        id="wimbledon",
        title="Simona Halep",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def howls_example() -> QedExample:
    question = "who wrote the film howl's moving castle?"
    sentences = [
        "Howl's Moving Castle is a 2004 Japanese animated fantasy film written"
        " and directed by Hayao Miyazaki.",
        "It is based on the novel of the same name, which was written by Diana"
        " Wynne Jones.",
        "The film was produced by Toshio Suzuki.",
    ]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "Hayao Miyazaki")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[0]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "the film howl's moving castle"),
                ExplicitMention(TextSpan.of(passage, "Howl's Moving Castle")),
            ),
        ),
        answers=(AnswerAnnotation(answer, answer),),
    )
    return QedExample(
        id="howls",
        title="Howl's Moving Castle",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def world_series_example() -> QedExample:
    question = "who sang the national anthem at the first game of 2017 world series"
    sentences = [
        "Game 1 of the 2017 World Series: The ceremonial first pitch was"
        " thrown out by members of former Dodger Jackie Robinson's family,"
        " including his widow Rachel.",
        "The game marked the 45th anniversary of Robinson's death.",
        'Keith Williams Jr., a gospel singer, performed "The Star-Spangled'
        ' Banner", the national anthem.',
    ]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "Keith Williams Jr.")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[2]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "the national anthem"),
                ExplicitMention(TextSpan.of(passage, "the national anthem")),
            ),
            ReferentialEquality(
                TextSpan.of(question, "the first game of 2017 world series"),
                ImplicitSentenceMention("at"),
            ),
        ),
        answers=(AnswerAnnotation(answer, answer),),
    )
    return QedExample(
        id="world-series",
        title="2017 World Series",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def got_talent_example() -> QedExample:
    question = "who won america's got talent season 11"
    sentences = [
        "The 11th season of America's Got Talent, an American talent show"
        " competition, began broadcasting in the United States during 2016.",
        "Grace VanderWaal was announced as the winner on September 14, 2016.",
    ]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "Grace VanderWaal")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[1]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "america's got talent season 11"),
                ImplicitPhraseMention(TextSpan.of(passage, "the winner"), "of"),
            ),
        ),
        answers=(AnswerAnnotation(answer, answer),),
    )
    return QedExample(
        id="got-talent",
        title="America's Got Talent (season 11)",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def acme_example() -> QedExample:
    question = "who were the founders of acme corp"
    sentences = [
        "Acme Corp is a company based in Dover.",
        "It was founded by Ann Lee and Bo Chen.",
    ]
    passage, boundaries = join_sentences(sentences)
    a1 = TextSpan.of(passage, "Ann Lee")
    a2 = TextSpan.of(passage, "Bo Chen")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[1]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "acme corp"),
                ExplicitMention(TextSpan.of(passage, "It")),
            ),
        ),
        answers=(AnswerAnnotation(a1, a1), AnswerAnnotation(a2, a2)),
    )
    return QedExample(
        id="acme",
        title="Acme Corp",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def title_link_example() -> QedExample:
    question = "where is the blue lagoon located"
    title = "Blue Lagoon"
    sentences = ["The spa sits on a lava field in Grindavik."]
    passage, boundaries = join_sentences(sentences)
    answer = TextSpan.of(passage, "a lava field")
    explanation = Explanation(
        selected_sentence=SentenceSpan(boundaries[0]),
        equalities=(
            ReferentialEquality(
                TextSpan.of(question, "the blue lagoon"),
                TitleMention(TextSpan.of(title, "Blue Lagoon")),
            ),
        ),
        answers=(AnswerAnnotation(answer, answer),),
    )
    return QedExample(
        id="blue-lagoon",
        title=title,
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.VALID_EXPLANATION,
        explanation=explanation,
    )


@pytest.fixture
def answer_only_example() -> QedExample:
    question = "where did they film and then there were none"
    sentences = [
        "Filming began in July 2015.",
        "Cornwall was used for many of the harbour and beach scenes.",
    ]
    passage, boundaries = join_sentences(sentences)
    return QedExample(
        id="filming",
        title="And Then There Were None",
        question=question,
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.ANSWER_ONLY,
        answer_spans=(TextSpan.of(passage, "Cornwall"),),
    )


@pytest.fixture
def no_answer_example() -> QedExample:
    sentences = ["The mill closed in 1901.", "Nothing else is recorded."]
    passage, boundaries = join_sentences(sentences)
    return QedExample(
        id="mill",
        title="Old Mill",
        question="who rebuilt the old mill",
        passage=passage,
        sentence_boundaries=boundaries,
        label=ExplanationLabel.NO_ANSWER,
        url="https://example.org/mill",
    )


@pytest.fixture
def fixture_corpus(
    michigan_example,
    wimbledon_example,
    howls_example,
    world_series_example,
    got_talent_example,
    acme_example,
    title_link_example,
    answer_only_example,
    no_answer_example,
) -> list[QedExample]:
    """All mention variants, multi-answer, and all three labels."""
    return [
        michigan_example,
        wimbledon_example,
        howls_example,
        world_series_example,
        got_talent_example,
        acme_example,
        title_link_example,
        answer_only_example,
        no_answer_example,
    ]
