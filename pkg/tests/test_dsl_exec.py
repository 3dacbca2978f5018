from __future__ import annotations

import json
import random

import pytest

from groundflow.dsl import ExecLimits, execute, parse, round_half_away
from groundflow.dsl.interp import short_repr
from groundflow.errors import (
    ApiRuntimeError,
    DslArithmeticError,
    DslRuntimeError,
    DslTypeError,
    NoMatchError,
    ResourceLimitError,
)


def run(source: str, bindings=None, limits=None):
    return execute(parse(source), bindings or {}, limits)


# --- answers from the fixture corpus ------------------------------------------------


def test_golden_easy_workflow_answers_custodian(apis):
    source = (
        'report = get_report("PRECIOUS METALS FUND")\n'
        'block = fetch_block(report, "PRECIOUS METALS FUND")\n'
        'answer = extract_entity(block, "custodian")'
    )
    result = run(source, apis.registry_bindings())
    assert result.answer == ["U.S. BANK NATIONAL ASSOCIATION"]
    assert [t.name for t in result.api_call_trace] == [
        "get_report",
        "fetch_block",
        "extract_entity",
    ]


def test_golden_intermediate_workflow_rounds_to_paper_value(apis):
    source = (
        'report = get_report("PROFUND VP INTERNET")\n'
        'block = fetch_block(report, "PROFUND VP INTERNET")\n'
        'commission = extract_value(block, "gross commission")\n'
        'assets = extract_value(block, "fund net assets")\n'
        "answer = commission / assets"
    )
    result = run(source, apis.registry_bindings())
    assert round_half_away(result.answer, 4) == 0.0001


def test_runaway_append_loop_hits_step_budget(apis):
    source = "blocks = [1] \nfor b in blocks { blocks = append(blocks, b) }"
    with pytest.raises(ResourceLimitError) as exc:
        run(source, {}, ExecLimits(max_steps=500))
    assert exc.value.budget == "step"


def test_api_error_propagates_with_trace_prefix(apis):
    source = (
        'good = get_report("PRECIOUS METALS FUND")\n'
        'bad = get_report("ZZZ TOTALLY UNKNOWN")'
    )
    with pytest.raises(ApiRuntimeError) as exc:
        run(source, apis.registry_bindings())
    assert isinstance(exc.value.cause, NoMatchError)
    assert [t.name for t in exc.value.trace] == ["get_report"]


# --- answer conventions ------------------------------------------------------------------


def test_answer_variable_wins_over_last_expression():
    result = run("answer = 7\n5 + 5")
    assert result.answer == 7.0


def test_last_expression_is_answer_when_unassigned():
    assert run("x = 2\nx * 3").answer == 6.0


def test_program_without_answer_errors():
    with pytest.raises(DslRuntimeError):
        run("x = 1")


def test_answer_must_be_flat_data():
    with pytest.raises(DslTypeError):
        run('answer = [1, "mixed"]')
    with pytest.raises(DslTypeError):
        run("answer = 1 == 1")


# --- arithmetic and builtins --------------------------------------------------------------


def test_division_by_zero():
    with pytest.raises(DslArithmeticError):
        run("answer = 1 / 0")


def test_round_half_away_from_zero():
    assert run("answer = round(2.5)").answer == 3.0
    assert run("answer = round(-2.5)").answer == -3.0
    assert run("answer = round(7.6142, 2)").answer == 7.61
    assert run("answer = round(0.00010264, 4)").answer == 0.0001


def test_round_half_away_helper_direct():
    assert round_half_away(0.5) == 1.0
    assert round_half_away(-0.5) == -1.0
    assert round_half_away(1.005, 2) == 1.01 or round_half_away(1.005, 2) == 1.0
    assert round_half_away(3280.334999, 2) == 3280.33


def test_num_strips_commas():
    assert run('answer = num("1,250,000")').answer == 1250000.0


def test_num_rejects_garbage():
    with pytest.raises(DslTypeError):
        run('answer = num("twelve")')


def test_string_concat_and_str():
    assert run('answer = "a" + "b"').answer == "ab"
    assert run("answer = str(2.5)").answer == "2.5"


def test_sum_len_min_max_unique_sort():
    assert run("answer = sum([1, 2, 3.5])").answer == 6.5
    assert run('answer = len("abcd")').answer == 4.0
    assert run("answer = len([1, 2])").answer == 2.0
    assert run("answer = min([3, 1, 2])").answer == 1.0
    assert run("answer = max(3, 9, 2)").answer == 9.0
    assert run('answer = unique(["b", "a", "b"])').answer == ["b", "a"]
    assert run('answer = sort(["b", "a", "c"])').answer == ["a", "b", "c"]


def test_append_mutates_in_place():
    result = run("xs = [1]\nys = append(xs, 2)\nanswer = sum(xs) + sum(ys)")
    assert result.answer == 6.0  # xs and ys are the same list


def test_list_indexing():
    assert run('answer = ["a", "b"][1]').answer == "b"
    with pytest.raises(DslRuntimeError):
        run("answer = [1, 2][5]")
    with pytest.raises(DslTypeError):
        run("answer = [1, 2][0.5]")


def test_comparison_type_rules():
    assert run('x = "a" == "a"\nanswer = 1\nif x { answer = 2 }').answer == 2.0
    assert run('x = "a" == 1\nanswer = 1\nif x { answer = 2 }').answer == 1.0
    with pytest.raises(DslTypeError):
        run('answer = 1 < "a"')


def test_for_requires_list_and_if_requires_bool():
    with pytest.raises(DslTypeError):
        run('for c in "abc" { x = 1 }\nanswer = 1')
    with pytest.raises(DslTypeError):
        run("if 1 { x = 2 }\nanswer = 1")


# --- budgets --------------------------------------------------------------------------------


def test_api_call_budget(apis):
    source = (
        "xs = [1, 1, 1, 1, 1, 1, 1, 1]\n"
        'for x in xs { r = get_report("PRECIOUS METALS FUND") }\n'
        "answer = 1"
    )
    with pytest.raises(ResourceLimitError) as exc:
        run(source, apis.registry_bindings(), ExecLimits(max_api_calls=3))
    assert exc.value.budget == "api call"


def test_value_size_budget():
    source = 's = "xxxxxxxxxx"\nfor i in [1, 2, 3, 4, 5, 6, 7, 8, 9, 10] { s = s + s }\nanswer = 1'
    with pytest.raises(ResourceLimitError) as exc:
        run(source, {}, ExecLimits(max_value_bytes=4096))
    assert exc.value.budget == "value size"


# --- determinism and the arithmetic oracle -------------------------------------------------------


def test_execution_is_deterministic_including_trace(apis):
    source = (
        "reports = get_all_reports()\n"
        "names = []\n"
        "for r in reports {\n"
        "    blocks = segment_report(r)\n"
        '    names = append(names, extract_entity(blocks[0], "fund name")[0])\n'
        "}\n"
        "answer = sort(unique(names))"
    )
    a = run(source, apis.registry_bindings())
    b = run(source, apis.registry_bindings())
    assert a.answer == b.answer
    assert [t.to_json_obj() for t in a.api_call_trace] == [
        t.to_json_obj() for t in b.api_call_trace
    ]
    assert a.steps_used == b.steps_used


class _HostOracle:
    """Evaluates the same straight-line arithmetic in plain Python."""

    def __init__(self):
        self.env: dict[str, float] = {}

    def statement(self, name: str, expr) -> None:
        self.env[name] = self.eval(expr)

    def eval(self, expr) -> float:
        kind = expr[0]
        if kind == "num":
            return expr[1]
        if kind == "var":
            return self.env[expr[1]]
        op, lhs, rhs = expr[1], self.eval(expr[2]), self.eval(expr[3])
        if op == "+":
            return lhs + rhs
        if op == "-":
            return lhs - rhs
        if op == "*":
            return lhs * rhs
        return lhs / rhs


def _gen_expr(rng: random.Random, names: list[str], depth: int):
    if depth == 0 or (names and rng.random() < 0.25):
        if names and rng.random() < 0.5:
            return ("var", rng.choice(names))
        return ("num", float(rng.randint(1, 50)))
    op = rng.choice(["+", "-", "*", "/"])
    lhs = _gen_expr(rng, names, depth - 1)
    rhs = _gen_expr(rng, names, depth - 1) if op != "/" else ("num", float(rng.randint(1, 9)))
    return ("binary", op, lhs, rhs)


def _expr_source(expr) -> str:
    kind = expr[0]
    if kind == "num":
        return str(int(expr[1]))
    if kind == "var":
        return expr[1]
    return f"({_expr_source(expr[2])} {expr[1]} {_expr_source(expr[3])})"


def test_interpreter_agrees_with_host_on_200_random_programs():
    rng = random.Random(941)
    for _ in range(200):
        oracle = _HostOracle()
        lines = []
        names: list[str] = []
        for i in range(rng.randint(1, 6)):
            expr = _gen_expr(rng, names, rng.randint(1, 3))
            name = f"v{i}"
            oracle.statement(name, expr)
            lines.append(f"{name} = {_expr_source(expr)}")
            names.append(name)
        lines.append(f"answer = {names[-1]}")
        result = run("\n".join(lines))
        assert result.answer == pytest.approx(oracle.env[names[-1]], rel=1e-12, abs=1e-12)


# --- trace serialization ----------------------------------------------------------------------------


def test_trace_entries_serialize_to_jsonl(apis):
    source = 'answer = extract_entity(fetch_block(get_report("COLUMBIA ACORN USA"), "COLUMBIA ACORN USA"), "custodian")'
    result = run(source, apis.registry_bindings())
    lines = [json.dumps(t.to_json_obj()) for t in result.api_call_trace]
    for line in lines:
        obj = json.loads(line)
        assert set(obj) == {"step", "name", "args", "digest"}
    assert json.loads(lines[0])["name"] == "get_report"


def test_short_repr_keeps_handles_opaque(apis):
    report = apis.get_report("PRECIOUS METALS FUND")
    rendered = short_repr(report)
    assert "0000897101-23-000215" in rendered
    assert "U.S. BANK" not in rendered  # body content never leaks into traces
