#!/usr/bin/env python3
"""Regenerate the scripted-conversation fixtures under fixtures/replays/.

Two recorded feedback scenarios, each a full conversation keyed by
history hash:

* february: the first draft treats the month in a fund's name as a time
  reference, looks up a fund that does not exist, and fails; feedback
  that the month is part of the name yields a correct second draft.
* purchase_sale: the first draft extracts 'purchase' and 'sale' as two
  separate values and fails; feedback that the term is a single label
  yields a correct second draft.

Also rewrites the full-lecture snapshot (fixtures/lecture_full.txt) and
the baseline prompt-frame snapshot (fixtures/baseline_prompt.txt), since
replays embed the lecture text. Rerun after any lecture wording change.
"""

from __future__ import annotations

import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))

from groundflow.baseline import PROMPT_FRAME  # noqa: E402
from groundflow.fixtures import (  # noqa: E402
    baseline_prompt_path,
    lecture_snapshot_path,
    registry_path,
    replay_path,
)
from groundflow.gateway.scripted import write_replay_file  # noqa: E402
from groundflow.gateway.types import ChatMessage  # noqa: E402
from groundflow.lecture import LectureConfig, load_registry, render_lecture  # noqa: E402
from groundflow.orchestrator import SUMMARY_PROMPT  # noqa: E402


def fenced(code: str) -> str:
    return f"Here is the workflow:\n```\n{code}\n```"


FEBRUARY_QUESTION = "What was the total purchase sale for the US EQUITY BUFFER FUND FEBRUARY?"
FEBRUARY_BAD = """\
report = get_report("US EQUITY BUFFER FUND")
block = fetch_block(report, "US EQUITY BUFFER FUND")
answer = extract_value(block, "total purchase sale in February")"""
FEBRUARY_FEEDBACK = "February is part of the fund name, not a time reference."
FEBRUARY_GOOD = """\
report = get_report("US EQUITY BUFFER FUND FEBRUARY")
block = fetch_block(report, "US EQUITY BUFFER FUND FEBRUARY")
answer = extract_value(block, "total purchase sale")"""
FEBRUARY_SUMMARY = (
    "The workflow fetches the report for US EQUITY BUFFER FUND FEBRUARY, locates "
    "that fund's block, and extracts its total purchase sale value."
)

PURCHASE_QUESTION = "What was the total purchase sale for the GREEN HORIZON BOND FUND?"
PURCHASE_BAD = """\
report = get_report("GREEN HORIZON BOND FUND")
block = fetch_block(report, "GREEN HORIZON BOND FUND")
purchase = extract_value(block, "purchase")
sale = extract_value(block, "sale")
answer = purchase + sale"""
PURCHASE_FEEDBACK = (
    "Purchase sale is a single term: extract 'total purchase sale' as one value."
)
PURCHASE_GOOD = """\
report = get_report("GREEN HORIZON BOND FUND")
block = fetch_block(report, "GREEN HORIZON BOND FUND")
answer = extract_value(block, "total purchase sale")"""
PURCHASE_SUMMARY = (
    "The workflow fetches the report for GREEN HORIZON BOND FUND, locates that "
    "fund's block, and extracts its total purchase sale value."
)


def record_scenario(
    lecture_text: str, question: str, bad: str, feedback: str, good: str, summary: str
) -> list[tuple[list[ChatMessage], str]]:
    history = [ChatMessage(role="system", content=lecture_text)]
    entries = []

    def exchange(user_content: str, reply: str) -> None:
        history.append(ChatMessage(role="user", content=user_content))
        entries.append((list(history), reply))
        history.append(ChatMessage(role="assistant", content=reply))

    exchange(question, fenced(bad))
    exchange(feedback, fenced(good))
    exchange(SUMMARY_PROMPT, summary)
    return entries


def main() -> None:
    registry = load_registry(registry_path())
    lecture = render_lecture(registry, LectureConfig())
    lecture_snapshot_path().write_text(lecture.text + "\n", encoding="utf-8")
    baseline_prompt_path().write_text(PROMPT_FRAME, encoding="utf-8")

    write_replay_file(
        replay_path("february"),
        record_scenario(
            lecture.text,
            FEBRUARY_QUESTION,
            FEBRUARY_BAD,
            FEBRUARY_FEEDBACK,
            FEBRUARY_GOOD,
            FEBRUARY_SUMMARY,
        ),
    )
    write_replay_file(
        replay_path("purchase_sale"),
        record_scenario(
            lecture.text,
            PURCHASE_QUESTION,
            PURCHASE_BAD,
            PURCHASE_FEEDBACK,
            PURCHASE_GOOD,
            PURCHASE_SUMMARY,
        ),
    )
    print("wrote lecture snapshot, prompt frame, and 2 replay fixtures")


if __name__ == "__main__":
    main()
