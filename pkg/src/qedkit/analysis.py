"""Corpus statistics: label counts, link distribution, exact-match rate,
and a heuristic referential-expression typer with a cross-tabulation.

The typer is a deterministic rule cascade, not a trained classifier; its
output is meant for structural analysis (totals, reproducible tables), not
to replicate expert typology judgments.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .corpus import CorpusDocument
from .model import (
    ExplanationLabel,
    ExplicitMention,
    ImplicitPhraseMention,
    ImplicitSentenceMention,
    PassageMention,
    QedExample,
    ReferentialEquality,
    TextSpan,
    TitleMention,
)
from .text import normalize_text


class ExpressionType(Enum):
    PROPER = "proper"
    DEF_NON_ANAPHORIC = "def_non_anaphoric"
    DEF_ANAPHORIC = "def_anaphoric"
    GENERIC = "generic"
    PRONOUN = "pronoun"
    BRIDGE = "bridge"
    MISC = "misc"


#: Row/column order of the cross-tabulation.
TYPE_ORDER: tuple[ExpressionType, ...] = (
    ExpressionType.PROPER,
    ExpressionType.DEF_NON_ANAPHORIC,
    ExpressionType.DEF_ANAPHORIC,
    ExpressionType.GENERIC,
    ExpressionType.PRONOUN,
    ExpressionType.BRIDGE,
    ExpressionType.MISC,
)

TYPE_ABBREV = {
    ExpressionType.PROPER: "P",
    ExpressionType.DEF_NON_ANAPHORIC: "N",
    ExpressionType.DEF_ANAPHORIC: "A",
    ExpressionType.GENERIC: "G",
    ExpressionType.PRONOUN: "Pn",
    ExpressionType.BRIDGE: "B",
    ExpressionType.MISC: "M",
}

PRONOUNS = frozenset(
    {"it", "its", "they", "their", "them", "he", "his", "him", "she", "her",
     "hers", "this", "that", "these", "those", "who", "which"}
)


def label_counts(corpus: CorpusDocument) -> dict[ExplanationLabel, int]:
    counts = {label: 0 for label in ExplanationLabel}
    for ex in corpus.examples:
        counts[ex.label] += 1
    return counts


def link_count_distribution(corpus: CorpusDocument) -> dict[int, int]:
    """Histogram over valid_explanation examples: equality count -> examples."""
    hist: Counter[int] = Counter()
    for ex in corpus.examples:
        if ex.label is ExplanationLabel.VALID_EXPLANATION and ex.explanation is not None:
            hist[len(ex.explanation.equalities)] += 1
    return dict(sorted(hist.items()))


def _iter_equalities(corpus: CorpusDocument):
    for ex in corpus.examples:
        if ex.label is ExplanationLabel.VALID_EXPLANATION and ex.explanation is not None:
            for eq in ex.explanation.equalities:
                yield ex, eq


def exact_match_rate(corpus: CorpusDocument) -> float:
    """Fraction of referential equalities whose two sides match as strings
    after normalization. Implicit and title mentions count as non-matches;
    0.0 when the corpus has no equalities."""
    total = 0
    matched = 0
    for _, eq in _iter_equalities(corpus):
        total += 1
        mention = eq.passage_mention
        if isinstance(mention, ExplicitMention):
            if normalize_text(eq.question_span.text) == normalize_text(mention.span.text):
                matched += 1
    return matched / total if total else 0.0


def classify_expression(
    surface: str,
    mention: PassageMention | TextSpan,
    context: QedExample,
) -> ExpressionType:
    """Deterministic rule cascade, applied in this order:

    1. bridge for implicit mention variants;
    2. pronoun for closed-class pronouns;
    3. definite NPs ("the ..."): anaphoric when the rest of the phrase
       already occurred earlier in the passage, else non-anaphoric
       (question-side definites have no prior context, hence non-anaphoric);
    4. proper when any word is capitalized or the phrase shares a word with
       the page title;
    5. generic for indefinites ("a"/"an") and bare plurals;
    6. misc otherwise.
    """
    if isinstance(mention, (ImplicitPhraseMention, ImplicitSentenceMention)):
        return ExpressionType.BRIDGE
    norm = normalize_text(surface)
    words = norm.split()
    if norm in PRONOUNS:
        return ExpressionType.PRONOUN
    if words and words[0] == "the":
        rest = " ".join(words[1:])
        if rest:
            prior = ""
            if isinstance(mention, ExplicitMention):
                prior = context.passage[: mention.span.start]
            elif isinstance(mention, TextSpan):
                pass  # question-side: the passage does not precede it
            if prior and rest in normalize_text(prior):
                return ExpressionType.DEF_ANAPHORIC
        return ExpressionType.DEF_NON_ANAPHORIC
    raw_words = surface.split()
    if any(w[:1].isupper() for w in raw_words):
        return ExpressionType.PROPER
    title_words = set(normalize_text(context.title).split())
    if title_words and any(w in title_words for w in words):
        return ExpressionType.PROPER
    if words and words[0] in ("a", "an"):
        return ExpressionType.GENERIC
    if words and words[-1].endswith("s") and not words[-1].endswith("ss"):
        return ExpressionType.GENERIC
    return ExpressionType.MISC


def _mention_surface(mention: PassageMention) -> str:
    if isinstance(mention, ExplicitMention):
        return mention.span.text
    if isinstance(mention, ImplicitPhraseMention):
        return mention.anchor.text
    if isinstance(mention, TitleMention):
        return mention.span.text
    return ""


@dataclass(frozen=True)
class Crosstab:
    """7x7 expression-type matrix; rows question side, columns passage side."""

    matrix: tuple[tuple[int, ...], ...]
    sample_size: int
    seed: int

    def row_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.matrix)

    def col_totals(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.matrix))

    @property
    def total(self) -> int:
        return sum(self.row_totals())

    def to_dict(self) -> dict:
        return {
            "rows": [t.value for t in TYPE_ORDER],
            "columns": [t.value for t in TYPE_ORDER],
            "matrix": [list(row) for row in self.matrix],
            "row_totals": list(self.row_totals()),
            "col_totals": list(self.col_totals()),
            "total": self.total,
            "sample_size": self.sample_size,
            "seed": self.seed,
        }


def expression_type_crosstab(corpus: CorpusDocument, sample_size: int = 100, seed: int = 0) -> Crosstab:
    """Cross-tabulate question-side vs passage-side expression types over a
    seeded deterministic sample of referential equalities."""
    population: list[tuple[QedExample, ReferentialEquality]] = list(_iter_equalities(corpus))
    rng = random.Random(seed)
    indices = list(range(len(population)))
    rng.shuffle(indices)
    chosen = sorted(indices[:sample_size]) if sample_size < len(indices) else list(range(len(population)))
    index = {t: i for i, t in enumerate(TYPE_ORDER)}
    matrix = [[0] * len(TYPE_ORDER) for _ in TYPE_ORDER]
    for i in chosen:
        ex, eq = population[i]
        q_type = classify_expression(eq.question_span.text, eq.question_span, ex)
        p_type = classify_expression(_mention_surface(eq.passage_mention), eq.passage_mention, ex)
        matrix[index[q_type]][index[p_type]] += 1
    return Crosstab(tuple(tuple(row) for row in matrix), sample_size=sample_size, seed=seed)


@dataclass(frozen=True)
class StatsReport:
    label_counts: dict[ExplanationLabel, int]
    link_histogram: dict[int, int]
    exact_match_rate: float
    crosstab: Crosstab

    def to_dict(self) -> dict:
        return {
            "label_counts": {label.value: n for label, n in self.label_counts.items()},
            "link_histogram": {str(k): v for k, v in self.link_histogram.items()},
            "exact_match_rate": self.exact_match_rate,
            "crosstab": self.crosstab.to_dict(),
        }


def build_stats(corpus: CorpusDocument, sample_size: int = 100, seed: int = 0) -> StatsReport:
    return StatsReport(
        label_counts=label_counts(corpus),
        link_histogram=link_count_distribution(corpus),
        exact_match_rate=exact_match_rate(corpus),
        crosstab=expression_type_crosstab(corpus, sample_size, seed),
    )


def format_stats_tables(report: StatsReport) -> str:
    lines = ["Label counts"]
    for label in ExplanationLabel:
        lines.append(f"  {label.value:<18} {report.label_counts[label]:>6}")
    lines.append("")
    lines.append("Referential link count")
    keys = sorted(report.link_histogram)
    lines.append("  links      " + "".join(f"{k:>7}" for k in keys))
    lines.append("  instances  " + "".join(f"{report.link_histogram[k]:>7}" for k in keys))
    lines.append("")
    lines.append(f"Exact-match rate: {report.exact_match_rate:.4f}")
    lines.append("")
    ct = report.crosstab
    lines.append(f"Expression types (question rows x passage columns; sample={ct.sample_size}, seed={ct.seed})")
    header = ["Qu\\Ps"] + [TYPE_ABBREV[t] for t in TYPE_ORDER] + ["T"]
    lines.append("  " + "".join(f"{h:>6}" for h in header))
    for t, row, total in zip(TYPE_ORDER, ct.matrix, ct.row_totals()):
        cells = [TYPE_ABBREV[t]] + [str(v) for v in row] + [str(total)]
        lines.append("  " + "".join(f"{cell:>6}" for cell in cells))
    cols = ["T"] + [str(v) for v in ct.col_totals()] + [str(ct.total)]
    lines.append("  " + "".join(f"{cell:>6}" for cell in cols))
    return "\n".join(lines) + "\n"
