from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from groundflow.dataset import Answer, AnswerKind, QaItem, Tier
from groundflow.errors import BenchError
from groundflow.evaluator import (
    BenchResult,
    MethodUnderTest,
    match_entities,
    match_number,
    render_table,
    run_bench,
)


# --- entity matching ---------------------------------------------------------


def test_match_entities_paper_example():
    assert match_entities(
        "The custodian is U.S. Bank National Association.",
        ["U.S. BANK NATIONAL ASSOCIATION"],
    )


def test_match_entities_requires_all_names():
    gold = ["FUND ALPHA", "FUND BETA"]
    assert not match_entities("Only FUND ALPHA is managed by them.", gold)
    assert match_entities("They manage FUND BETA and FUND ALPHA.", gold)


def test_match_entities_empty_prediction_fails():
    assert not match_entities("", ["ANY NAME"])


def test_match_entities_requires_nonempty_gold():
    with pytest.raises(ValueError):
        match_entities("anything", [])


def test_match_entities_is_order_insensitive():
    gold_a = ["A FUND", "B FUND"]
    predicted = "B FUND, A FUND"
    assert match_entities(predicted, gold_a) == match_entities(predicted, list(reversed(gold_a)))


@given(st.text(max_size=60), st.lists(st.text(min_size=1, max_size=12), min_size=1, max_size=4))
def test_match_entities_monotone_adding_gold_never_flips_true(predicted, gold):
    extra = gold + ["zzz-not-present-zzz"]
    if match_entities(predicted, extra):
        assert match_entities(predicted, gold)


# --- numeric matching ---------------------------------------------------------------


def test_match_number_rounding_to_gold_precision():
    assert match_number("The ratio is 7.6142", 7.61, 2)
    assert match_number("approximately 0.0001", 0.0001, 4)
    assert not match_number("no idea", 42.0, 0)


def test_match_number_formatting_invariance():
    assert match_number("3280.3300", 3280.33, 2)
    assert match_number("the total is 3,280.33 dollars", 3280.33, 2)
    assert match_number("answer: 20338.0", 20338.0, 1)
    assert match_number("roughly 20338", 20338.0, 0)


def test_match_number_rejects_wrong_values():
    assert not match_number("7.62", 7.61, 2)
    assert not match_number("0.001", 0.0001, 4)


def test_match_number_any_token_may_satisfy():
    assert match_number("between 7.0 and 7.61 overall", 7.61, 2)


def test_match_number_negative_and_precision_zero():
    assert match_number("-12.4", -12.0, 0)
    assert not match_number("-13.4", -12.0, 0)


# --- bench runner ----------------------------------------------------------------------


def items_fixture() -> list[QaItem]:
    return [
        QaItem(
            id="e1",
            tier=Tier.EASY,
            question="Who is the custodian for the X FUND?",
            answer=Answer(kind=AnswerKind.ENTITIES, entities=("BANK A",)),
            relations=("custodian",),
            source_funds=("X FUND",),
        ),
        QaItem(
            id="e2",
            tier=Tier.EASY,
            question="What was the gross commission for the X FUND?",
            answer=Answer(kind=AnswerKind.NUMBER, value=12.5, precision=1),
            relations=("gross commission",),
            source_funds=("X FUND",),
        ),
        QaItem(
            id="h1",
            tier=Tier.HARD,
            question="What funds use BANK A as their custodian?",
            answer=Answer(kind=AnswerKind.ENTITIES, entities=("X FUND", "Y FUND")),
            relations=("custodian",),
            source_funds=("X FUND", "Y FUND"),
        ),
    ]


PERFECT = {
    "Who is the custodian for the X FUND?": "BANK A",
    "What was the gross commission for the X FUND?": "12.5",
    "What funds use BANK A as their custodian?": "['X FUND', 'Y FUND']",
}


def test_run_bench_perfect_method_scores_one():
    method = MethodUnderTest(name="perfect", answer_fn=PERFECT.__getitem__)
    result = run_bench(method, items_fixture(), "EASY")
    assert result.accuracy == 1.0
    assert result.total == 2
    assert all(r.verdict for r in result.per_item)


def test_run_bench_empty_method_scores_zero():
    method = MethodUnderTest(name="empty", answer_fn=lambda q: "")
    result = run_bench(method, items_fixture(), None)
    assert result.accuracy == 0.0
    assert result.tier == "ALL"


def test_run_bench_empty_item_list_is_an_error():
    method = MethodUnderTest(name="m", answer_fn=lambda q: "")
    with pytest.raises(BenchError):
        run_bench(method, [], None)
    with pytest.raises(BenchError):
        run_bench(method, items_fixture(), "INTERMEDIATE")


def test_run_bench_method_errors_count_incorrect_and_are_recorded():
    def flaky(question: str) -> str:
        if "gross" in question:
            raise RuntimeError("backend exploded")
        return PERFECT[question]

    result = run_bench(MethodUnderTest(name="flaky", answer_fn=flaky), items_fixture(), "EASY")
    assert result.correct == 1
    failed = [r for r in result.per_item if not r.verdict]
    assert failed[0].error == "backend exploded"


def test_run_bench_deterministic_and_parallel_equivalent():
    method = MethodUnderTest(name="perfect", answer_fn=PERFECT.__getitem__)
    a = run_bench(method, items_fixture(), None, workers=1)
    b = run_bench(method, items_fixture(), None, workers=4)
    assert a.to_json_obj() == b.to_json_obj()


# --- table rendering ----------------------------------------------------------------------


def make_result(method: str, tier: str, correct: int, total: int) -> BenchResult:
    return BenchResult(method=method, tier=tier, correct=correct, total=total, per_item=())


def test_render_table_single_cell():
    table = render_table([make_result("m", "EASY", 1, 2)])
    assert "m" in table and "50.0%" in table


def test_render_table_empty_is_header_only():
    table = render_table([])
    assert table.splitlines()[0].startswith("Tier")
    assert len(table.splitlines()) == 2


def test_render_table_rows_sorted_by_tier():
    results = [
        make_result("m", "HARD", 1, 2),
        make_result("m", "EASY", 2, 2),
        make_result("m", "INTERMEDIATE", 0, 2),
    ]
    lines = render_table(results).splitlines()
    assert [line.split()[0] for line in lines[2:]] == ["EASY", "INTERMEDIATE", "HARD"]


def test_render_table_one_decimal_percentages():
    table = render_table([make_result("m", "EASY", 199, 200)])
    assert "99.5%" in table
