"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
PASS lines as they print). Every tolerance is pinned here; nothing is
calibrated elsewhere.
"""

from __future__ import annotations

import random
import time

import pytest

from groundflow import dataset as ds
from groundflow.baseline import RetrievalBaseline, block_id
from groundflow.dsl import execute, parse, validate
from groundflow.errors import DslError, DslSyntaxError
from groundflow.evaluator import match_entities, match_number, run_bench
from groundflow.gateway import LocalEmbeddingBackend, ScriptedChatBackend, cosine
from groundflow.fixtures import replay_path
from groundflow.lecture import LectureConfig, Variant
from groundflow.methods import FaultInjectingBackend, GoldenWorkflowBackend, flowmind_method
from groundflow.orchestrator import Orchestrator
from groundflow.tokens import ApproxTokenCounter

PASS = "ACCEPTANCE {name}: PASS"


def make_orchestrator(apis, registry, backend) -> Orchestrator:
    return Orchestrator(registry=registry, gateway=backend, bindings=apis.registry_bindings())


# --- 1. golden-pipeline accuracy -----------------------------------------------------


def test_golden_pipeline_accuracy_100_percent_all_tiers(apis, registry, qa_items):
    assert all(
        sum(1 for i in qa_items if i.tier.value == tier) >= 30 for tier in ds.TIER_ORDER
    )
    started = time.monotonic()
    method = flowmind_method(
        "flowmind",
        make_orchestrator(apis, registry, GoldenWorkflowBackend(qa_items)),
        LectureConfig(variant=Variant.FULL),
        items=qa_items,
    )
    for tier in ds.TIER_ORDER:
        result = run_bench(method, qa_items, tier)
        assert result.accuracy == 1.0, f"{tier}: {result.correct}/{result.total}"
        assert f"{100.0 * result.accuracy:.1f}" == "100.0"
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"golden bench took {elapsed:.1f}s"
    print(PASS.format(name="golden-pipeline-accuracy") + f" ({elapsed:.1f}s)")


# --- 2. paper example values -----------------------------------------------------------


def test_paper_example_values_reproduce_exactly(apis):
    def block(fund: str):
        return apis.fetch_block(apis.get_report(fund), fund)

    # custodian entity lookups
    assert apis.extract_entity(block("COLUMBIA ACORN USA"), "custodian") == [
        "JPMORGAN CHASE BANK, N.A."
    ]
    assert apis.extract_entity(block("PRECIOUS METALS FUND"), "custodian") == [
        "U.S. BANK NATIONAL ASSOCIATION"
    ]
    # direct value
    assert apis.extract_value(block("WCM SMALL CAP GROWTH FUND"), "gross commission") == 20338.0
    # ratios at ground-truth precision
    profund = block("PROFUND VP INTERNET")
    ratio = apis.extract_value(profund, "gross commission") / apis.extract_value(
        profund, "fund net assets"
    )
    assert ds.ratio_answer(ratio).value == 0.0001
    siit = block("SIIT CORE FIXED INCOME FUND")
    ratio = apis.extract_value(siit, "total purchase sale") / apis.extract_value(
        siit, "fund net assets"
    )
    assert ds.ratio_answer(ratio).value == 7.61
    # two-fund adviser list via the whole-corpus scan
    advised = ds.service_company_map(apis)[("investment adviser", "FEDERATED HERMES (UK) LLP")]
    assert advised == {
        "FEDERATED HERMES MANAGED VOLATILITY FUND II",
        "FEDERATED HERMES GLOBAL TOTAL RETURN BOND FUND",
    }
    # three-fund aggregation
    total = sum(
        apis.extract_value(block(fund), "gross commission")
        for fund in (
            "MASSMUTUAL RETIRESMART BY JPMORGAN 2035 FUND",
            "LORD ABBETT INTERNATIONAL GROWTH FUND",
            "NEBRASKA TAX-FREE INCOME FUND",
        )
    )
    assert round(total, 2) == 3280.33
    print(PASS.format(name="paper-example-values"))


# --- 3. ablation ordinal check -----------------------------------------------------------


def test_ablation_ordering_matches_reported_direction(apis, registry, qa_items):
    backend = FaultInjectingBackend(qa_items, seed=0)
    accuracies: dict[str, dict[str, float]] = {}
    for name, variant in [
        ("FULL", Variant.FULL),
        ("NCT", Variant.NCT),
        ("BA", Variant.BA),
        ("NCP", Variant.NCP),
    ]:
        method = flowmind_method(
            name.lower(),
            make_orchestrator(apis, registry, backend),
            LectureConfig(variant=variant),
            items=qa_items,
        )
        accuracies[name] = {
            tier: run_bench(method, qa_items, tier).accuracy for tier in ds.TIER_ORDER
        }
    for tier in ds.TIER_ORDER:
        full, nct = accuracies["FULL"][tier], accuracies["NCT"][tier]
        ba, ncp = accuracies["BA"][tier], accuracies["NCP"][tier]
        assert full > nct > ncp, f"{tier}: FULL {full}, NCT {nct}, NCP {ncp}"
        assert full > ba, f"{tier}: FULL {full}, BA {ba}"
    print(PASS.format(name="ablation-ordinal") + f" ({accuracies})")


# --- 4. sandbox soundness --------------------------------------------------------------------


def test_sandbox_rejects_or_limits_500_adversarial_programs(apis, registry_arities):
    from .test_sandbox import LIMITS, hostile_program  # single source of adversaries

    rng = random.Random(20240501)
    bindings = apis.registry_bindings()
    registered = set(bindings)
    contained = 0
    for _ in range(500):
        source = hostile_program(rng)
        try:
            program = parse(source)
        except DslSyntaxError:
            contained += 1
            continue
        if validate(program, registry_arities):
            contained += 1
            continue
        try:
            execute(program, bindings, LIMITS)
        except DslError as exc:
            assert all(t.name in registered for t in getattr(exc, "trace", [])), source
            contained += 1
            continue
        pytest.fail(f"adversarial program escaped containment: {source!r}")
    assert contained == 500
    print(PASS.format(name="sandbox-soundness") + " (500/500 contained)")


# --- 5. metric unit suite -----------------------------------------------------------------------


def test_metric_suite_entity_and_number_rules():
    assert match_entities(
        "The custodian is U.S. Bank National Association.",
        ["U.S. BANK NATIONAL ASSOCIATION"],
    )
    # "captures all" rule: one of two gold funds is not enough
    two_funds = ["FEDERATED HERMES MANAGED VOLATILITY FUND II",
                 "FEDERATED HERMES GLOBAL TOTAL RETURN BOND FUND"]
    assert not match_entities("FEDERATED HERMES MANAGED VOLATILITY FUND II", two_funds)
    assert match_entities(
        "['FEDERATED HERMES GLOBAL TOTAL RETURN BOND FUND', "
        "'FEDERATED HERMES MANAGED VOLATILITY FUND II']",
        two_funds,
    )
    assert not match_entities("", ["ANYTHING"])

    assert match_number("The ratio is 7.6142", 7.61, 2)
    assert match_number("approximately 0.0001", 0.0001, 4)
    assert match_number("3,280.33", 3280.33, 2)
    assert not match_number("7.62", 7.61, 2)
    assert not match_number("no idea", 1.0, 0)
    print(PASS.format(name="metric-unit-suite"))


# --- 6. baseline truncation and retrieval oracle ---------------------------------------------------


def test_baseline_budgets_and_retrieval_oracle(apis, qa_items):
    counter = ApproxTokenCounter()
    observed_embed_tokens: list[int] = []

    class CountingEmbedder(LocalEmbeddingBackend):
        def embed(self, text):
            observed_embed_tokens.append(counter.count(text))
            return super().embed(text)

    embedder = CountingEmbedder()
    retrieval = RetrievalBaseline(apis, embedder)

    # stress corpus: the real blocks plus a giant synthetic one
    import datetime as dt

    from groundflow.corpus.models import FilingRef
    from groundflow.ncen.api import FundBlock

    giant = FundBlock(
        fund_name="GIANT STRESS FUND",
        text="Item C.1. Fund name: GIANT STRESS FUND\n" + "padding words " * 12_000,
        source=FilingRef("S-1", dt.date(2023, 1, 1), "mem://S-1"),
        start=0,
    )
    assert counter.count(giant.text) > 8191
    real_blocks = apis.all_blocks()
    stressed = real_blocks + [giant]
    original = apis.all_blocks
    try:
        apis.all_blocks = lambda: stressed  # type: ignore[method-assign]
        index = retrieval.build_index()
    finally:
        apis.all_blocks = original  # type: ignore[method-assign]
    assert observed_embed_tokens and max(observed_embed_tokens) <= 8191

    # prompts never exceed the completion budget, question included
    for blocks in ([giant], [giant, giant], real_blocks[:3] + [giant]):
        prompt = retrieval.build_prompt("What was the gross commission for the GIANT STRESS FUND?", blocks)
        assert counter.count(prompt) <= 4096

    # retrieval equals the exhaustive cosine scan on every fixture question
    index = retrieval.build_index()
    lookup = {block_id(b): b for b in apis.all_blocks()}
    for item in qa_items:
        question_vec = embedder.embed(item.question)
        oracle_order = sorted(
            ((cosine(e.vector, question_vec), e.block_id) for e in index.entries),
            key=lambda pair: (-pair[0], pair[1]),
        )
        expected = [bid for _, bid in oracle_order[:3]]
        got = [block_id(b) for b in retrieval.retrieve(index, item.question, k=3)]
        assert got == expected, item.id
    print(PASS.format(name="baseline-truncation-and-oracle"))


# --- 7. feedback replay ------------------------------------------------------------------------------


def test_feedback_replays_flip_incorrect_to_correct(apis, registry):
    from groundflow.evaluator import score_item

    scenarios = [
        (
            "february",
            "What was the total purchase sale for the US EQUITY BUFFER FUND FEBRUARY?",
            "February is part of the fund name, not a time reference.",
            "US EQUITY BUFFER FUND FEBRUARY",
        ),
        (
            "purchase_sale",
            "What was the total purchase sale for the GREEN HORIZON BOND FUND?",
            "Purchase sale is a single term: extract 'total purchase sale' as one value.",
            "GREEN HORIZON BOND FUND",
        ),
    ]
    for name, question, feedback_text, fund in scenarios:
        gold_value = apis.extract_value(
            apis.fetch_block(apis.get_report(fund), fund), "total purchase sale"
        )
        gold = ds.QaItem(
            id=f"replay-{name}",
            tier=ds.Tier.EASY,
            question=question,
            answer=ds.number_answer(gold_value),
            relations=("total purchase sale",),
            source_funds=(fund,),
        )
        backend = ScriptedChatBackend.from_replay_file(replay_path(name))
        orch = make_orchestrator(apis, registry, backend)
        session = orch.start_session(LectureConfig())
        first = orch.ask(session, question)
        first_verdict = first.ok and score_item(gold, first.answer_display)
        assert not first_verdict, f"{name}: first draft must score incorrect"
        second = orch.feedback(session, feedback_text)
        assert second.ok and score_item(gold, second.answer_display), name
    print(PASS.format(name="feedback-replay"))
