import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qedkit.errors import DuplicateJudgmentError, InconsistentGoldError
from qedkit.rater import (
    Condition,
    JudgedErrorType,
    JudgmentRecord,
    aggregate_judgments,
    format_rater_table,
    judgment_to_record,
    parse_judgments,
    per_question_accuracy,
    record_to_judgment,
    wilson_interval,
)
from qedkit.synthetic import synthetic_judgment_log


def _record(rater, instance, correct, verdict, condition=Condition.NONE, error=None, confidence=None):
    return JudgmentRecord(
        rater_id=rater,
        instance_id=instance,
        condition=condition,
        instance_correct=correct,
        verdict=verdict,
        error_type=error,
        confidence=confidence,
    )


def test_four_record_hand_count():
    log = [
        _record("r1", "i1", True, True),
        _record("r1", "i2", True, True),
        _record("r1", "i3", False, True, error=JudgedErrorType.PRED),
        _record("r1", "i4", False, True, error=JudgedErrorType.REF),
    ]
    report = aggregate_judgments(log)
    stats = report.conditions[Condition.NONE]
    assert stats.accuracy_all == 50.0
    assert stats.accuracy_correct == 100.0
    assert stats.accuracy_incorrect == 0.0
    assert stats.f1_incorrect == 0.0
    assert stats.n_judgments == 4


def test_all_perfect_log():
    log = [
        _record("r1", "i1", True, True, Condition.QED),
        _record("r2", "i2", False, False, Condition.QED, error=JudgedErrorType.PRED),
    ]
    stats = aggregate_judgments(log).conditions[Condition.QED]
    assert stats.accuracy_all == 100.0
    assert stats.accuracy_correct == 100.0
    assert stats.accuracy_incorrect == 100.0
    assert stats.f1_incorrect == 100.0


def test_error_type_breakdown():
    log = [
        _record("r1", "i1", False, False, error=JudgedErrorType.PRED),
        _record("r1", "i2", False, True, error=JudgedErrorType.REF),
    ]
    stats = aggregate_judgments(log).conditions[Condition.NONE]
    assert stats.accuracy_incorrect_pred == 100.0
    assert stats.accuracy_incorrect_ref == 0.0
    assert stats.accuracy_incorrect == 50.0


def test_duplicate_judgment_rejected():
    log = [_record("r1", "i1", True, True), _record("r1", "i1", True, False)]
    with pytest.raises(DuplicateJudgmentError):
        aggregate_judgments(log)


def test_inconsistent_gold_rejected():
    log = [
        _record("r1", "i1", True, True),
        _record("r2", "i1", False, True, error=JudgedErrorType.PRED),
    ]
    with pytest.raises(InconsistentGoldError):
        aggregate_judgments(log)


def test_permutation_invariance():
    log = synthetic_judgment_log(seed=3)
    report = aggregate_judgments(log)
    shuffled = list(log)
    random.Random(99).shuffle(shuffled)
    assert aggregate_judgments(shuffled) == report


def test_rater_weighted_mode():
    log = [
        _record("r1", "i1", True, True),
        _record("r1", "i2", True, True),
        _record("r1", "i3", True, True),
        _record("r2", "i1", True, False),
    ]
    judgment = aggregate_judgments(log).conditions[Condition.NONE]
    rater = aggregate_judgments(log, weighting="rater").conditions[Condition.NONE]
    assert judgment.accuracy_all == 75.0
    assert rater.accuracy_all == 50.0  # mean of 100 (r1) and 0 (r2)


# -- per-question -------------------------------------------------------------


def test_wilson_ten_of_ten():
    low, high = wilson_interval(10, 10)
    assert round(low, 3) == 0.722
    assert high == 1.0


def test_wilson_matches_quadratic_roots():
    z = 1.959963984540054
    for successes, n in [(0, 1), (1, 1), (3, 7), (10, 10), (17, 40), (250, 300)]:
        phat = successes / n
        a = 1 + z * z / n
        b = -(2 * phat + z * z / n)
        c = phat * phat
        disc = math.sqrt(b * b - 4 * a * c)
        lo, hi = (-b - disc) / (2 * a), (-b + disc) / (2 * a)
        got = wilson_interval(successes, n)
        assert got[0] == pytest.approx(max(0.0, lo), abs=1e-9)
        assert got[1] == pytest.approx(min(1.0, hi), abs=1e-9)


def test_single_wrong_judgment():
    out = per_question_accuracy([_record("r1", "i1", True, False)])
    assert out[0].accuracy == 0.0
    assert out[0].n == 1


def test_ties_order_by_instance_id():
    log = [
        _record("r1", "b", True, True),
        _record("r1", "a", True, True),
    ]
    out = per_question_accuracy(log)
    assert [q.instance_id for q in out] == ["a", "b"]


def test_sorted_ascending_by_accuracy():
    log = [
        _record("r1", "good", True, True),
        _record("r2", "good", True, True),
        _record("r1", "bad", True, False),
        _record("r2", "bad", True, True),
    ]
    out = per_question_accuracy(log)
    assert [q.instance_id for q in out] == ["bad", "good"]
    assert out[0].accuracy == 0.5


# -- codec ---------------------------------------------------------------------


def test_judgment_record_round_trip():
    log = synthetic_judgment_log(seed=11)
    for record in log:
        assert record_to_judgment(judgment_to_record(record)) == record


def test_parse_rejects_missing_error_type():
    import json

    good = judgment_to_record(_record("r", "i", False, True, error=JudgedErrorType.PRED))
    bad = dict(good)
    del bad["error_type"]
    data = (json.dumps(good) + "\n" + json.dumps(bad) + "\n").encode()
    log = parse_judgments(data)
    assert len(log.records) == 1
    assert [e.line for e in log.parse_errors] == [2]


def test_table_mirrors_conditions():
    log = synthetic_judgment_log(seed=5)
    table = format_rater_table(aggregate_judgments(log))
    assert "None" in table and "Sentence" in table and "QED" in table
    assert "Incorr/Pred/Ref" in table


# -- brute-force property -------------------------------------------------------


@given(st.integers(0, 2**31 - 1))
def test_f1_identity_against_counts(seed):
    log = synthetic_judgment_log(seed=seed % 1000, n_raters=6, n_instances=8)
    report = aggregate_judgments(log)
    for condition, stats in report.conditions.items():
        records = [r for r in log if r.condition is condition]
        tp = sum(1 for r in records if not r.verdict and not r.instance_correct)
        flags = sum(1 for r in records if not r.verdict)
        gold_incorrect = sum(1 for r in records if not r.instance_correct)
        p = tp / flags if flags else 0.0
        rec = tp / gold_incorrect if gold_incorrect else 0.0
        expected = 100.0 * (2 * p * rec / (p + rec)) if p + rec else 0.0
        assert stats.f1_incorrect == pytest.approx(expected)
