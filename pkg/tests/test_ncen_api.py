from __future__ import annotations

import pytest

from groundflow.corpus import CorpusStore
from groundflow.errors import LabelNotFoundError, NoMatchError, ValueParseError
from groundflow.fuzz import similarity
from groundflow.ncen import NcenApis, parse_entities, parse_value_items, segment_text
from groundflow.ncen.api import FundBlock


def block_for(apis, fund: str) -> FundBlock:
    return apis.fetch_block(apis.get_report(fund), fund)


# --- segmentation ------------------------------------------------------------


def test_segment_counts_match_manifest(apis, manifest):
    by_accession = {r["accession"]: r["funds"] for r in manifest["reports"]}
    for report in apis.get_all_reports():
        blocks = apis.segment_report(report)
        assert [b.fund_name for b in blocks] == by_accession[report.ref.accession_number]


def test_segments_are_ordered_contiguous_substrings(apis):
    for report in apis.get_all_reports():
        blocks = apis.segment_report(report)
        previous_end = None
        for block in blocks:
            start = block.start
            assert report.body[start : start + len(block.text)] == block.text
            assert block.fund_name in block.text
            if previous_end is not None:
                assert start == previous_end, "blocks must tile the fund region"
            previous_end = start + len(block.text)
        if blocks:
            assert previous_end == len(report.body)


def test_segment_single_fund_body():
    body = "Item C.1. Fund name: ONLY FUND\nItem C.15. Gross commission: 5.0\n"
    segments = segment_text(body)
    assert len(segments) == 1
    assert segments[0].fund_name == "ONLY FUND"
    assert body[segments[0].start : segments[0].end] == body


def test_segment_no_fund_markers_yields_nothing():
    assert segment_text("N-CEN ANNUAL REPORT\nnothing fundlike here\n") == []


# --- retrieval -----------------------------------------------------------------


def test_get_report_exact_name(apis):
    report = apis.get_report("PRECIOUS METALS FUND")
    assert report.ref.accession_number == "0000897101-23-000215"
    assert "PRECIOUS METALS FUND" in report.fund_names


def test_get_report_tolerates_case_and_spacing(apis):
    noisy = "  precious   metals fund "
    assert similarity(noisy, "PRECIOUS METALS FUND").score >= 85
    report = apis.get_report(noisy)
    assert report.ref.accession_number == "0000897101-23-000215"


def test_get_report_no_match_lists_top_candidates(apis):
    with pytest.raises(NoMatchError) as exc:
        apis.get_report("ZZZ NONEXISTENT")
    assert len(exc.value.candidates) == 3
    assert all(score < 85 for _, score in exc.value.candidates)


def test_get_all_reports_sorted_and_deterministic(apis, manifest):
    reports = apis.get_all_reports()
    accessions = [r.ref.accession_number for r in reports]
    assert len(reports) == manifest["report_count"]
    assert accessions == sorted(accessions)
    again = apis.get_all_reports()
    assert [r.ref for r in again] == [r.ref for r in reports]


def test_fetch_block_exact_and_misspelled(apis):
    report = apis.get_report("COLUMBIA ACORN USA")
    exact = apis.fetch_block(report, "COLUMBIA ACORN USA")
    assert exact.fund_name == "COLUMBIA ACORN USA"
    misspelled = "COLUMBIA ACRON USA"  # transposition, still above threshold
    assert similarity(misspelled, "COLUMBIA ACORN USA").score >= 85
    assert apis.fetch_block(report, misspelled).fund_name == "COLUMBIA ACORN USA"


def test_fetch_block_fund_from_other_report_is_no_match(apis):
    report = apis.get_report("COLUMBIA ACORN USA")
    foreign = "PRECIOUS METALS FUND"
    for name in report.fund_names:
        assert similarity(foreign, name).score < 85
    with pytest.raises(NoMatchError):
        apis.fetch_block(report, foreign)


# --- extraction ---------------------------------------------------------------------


def test_extract_entity_custodian_columbia(apis):
    block = block_for(apis, "COLUMBIA ACORN USA")
    assert apis.extract_entity(block, "custodian") == ["JPMORGAN CHASE BANK, N.A."]


def test_extract_entity_custodian_precious_metals(apis):
    block = block_for(apis, "PRECIOUS METALS FUND")
    assert apis.extract_entity(block, "custodian") == ["U.S. BANK NATIONAL ASSOCIATION"]


def test_extract_entity_label_is_fuzzy(apis):
    block = block_for(apis, "PRECIOUS METALS FUND")
    # paper-style phrasings resolve onto the report's role labels
    assert apis.extract_entity(block, "investment advisor") == ["SIERRA GLOBAL ADVISORS LLC"]
    assert apis.extract_entity(block, "administrators") == ["USB FUND SERVICES LLC"]
    assert apis.extract_entity(block, "pricing services") == [
        "ICE DATA PRICING AND REFERENCE DATA LLC"
    ]


def test_extract_entity_unknown_role_is_empty_not_error(apis):
    block = block_for(apis, "PRECIOUS METALS FUND")
    assert apis.extract_entity(block, "transfer agent underwriter") == []


@pytest.mark.parametrize(
    "fund,label,expected_count",
    [
        ("WCM SMALL CAP GROWTH FUND", "collateral manager", 0),
        ("PRECIOUS METALS FUND", "custodian", 1),
        ("COLUMBIA ACORN INTERNATIONAL SELECT", "administrator", 2),
        ("SIIT DYNAMIC ASSET ALLOCATION FUND", "pricing service", 3),
    ],
)
def test_extract_entity_multiplicity(apis, fund, label, expected_count):
    block = block_for(apis, fund)
    names = apis.extract_entity(block, label)
    assert len(names) == expected_count
    assert len(set(names)) == expected_count


def test_extract_entity_preserves_document_order(apis):
    block = block_for(apis, "COLUMBIA ACORN INTERNATIONAL SELECT")
    names = apis.extract_entity(block, "administrator")
    first = block.text.find(names[0])
    second = block.text.find(names[1])
    assert -1 < first < second


def test_extract_value_paper_commission(apis):
    block = block_for(apis, "WCM SMALL CAP GROWTH FUND")
    assert apis.extract_value(block, "gross commission") == 20338.0


def test_extract_value_strips_commas():
    body = "Item C.1. Fund name: COMMA FUND\nItem C.16. Total purchase sale: 1,250,000\n"
    items = parse_value_items(body)
    by_label = {i.label: i for i in items}
    assert by_label["Total purchase sale"].as_number() == 1250000.0


def test_extract_value_missing_label(apis):
    block = block_for(apis, "PRECIOUS METALS FUND")
    with pytest.raises(LabelNotFoundError):
        apis.extract_value(block, "management fee waiver")


def test_extract_value_unparseable_token_names_it():
    item = parse_value_items("Item C.15. Gross commission: not disclosed\n")[0]
    with pytest.raises(ValueParseError) as exc:
        item.as_number()
    assert exc.value.token == "not disclosed"


def test_fund_name_is_discoverable_as_entity(apis):
    block = block_for(apis, "SIIT CORE FIXED INCOME FUND")
    assert apis.extract_entity(block, "fund name") == ["SIIT CORE FIXED INCOME FUND"]


def test_entity_records_carry_item_codes():
    body = (
        "Item C.1. Fund name: X FUND\n"
        '<entity role="custodian" item="C.12">\n'
        "  <name>BANK A</name>\n"
        "  <lei>LEI1</lei>\n"
        "</entity>\n"
    )
    records = parse_entities(body)
    assert [(r.label, r.name) for r in records] == [("fund name", "X FUND"), ("custodian", "BANK A")]
    assert records[1].attributes["item"] == "C.12"
    assert records[1].attributes["lei"] == "LEI1"


# --- the golden chain invariant --------------------------------------------------------


def test_chaining_apis_reproduces_every_fixture_answer(apis, qa_items):
    """get_report -> fetch_block -> extract_* rebuilds each stored truth."""
    from groundflow.dataset import AnswerKind, Tier

    for item in qa_items:
        if item.tier is not Tier.EASY:
            continue
        fund = item.source_funds[0]
        block = block_for(apis, fund)
        if item.answer.kind is AnswerKind.ENTITIES:
            assert tuple(apis.extract_entity(block, item.relations[0])) == item.answer.entities
        else:
            assert apis.extract_value(block, item.relations[0]) == item.answer.value


def test_similarity_is_exposed_by_the_api_module(apis):
    score = apis.similarity("FUND A", "fund a")
    assert score.score == 100.0


def test_caches_share_one_parse(apis):
    report = apis.get_report("PRECIOUS METALS FUND")
    first = apis.segment_report(report)
    second = apis.segment_report(report)
    assert [b.block_key for b in first] == [b.block_key for b in second]


def test_apis_work_from_a_freshly_loaded_index(fixture_store, tmp_path):
    # a store round-trip must be enough to answer queries
    apis = NcenApis(CorpusStore(fixture_store.root))
    block = apis.fetch_block(apis.get_report("GREEN HORIZON BOND FUND"), "GREEN HORIZON BOND FUND")
    assert apis.extract_value(block, "fund net assets") == 1800000.0
