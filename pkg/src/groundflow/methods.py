"""Benchmark methods and the deterministic backends that drive them.

Three chat backends live here:

* GoldenWorkflowBackend replays the checked-in reference workflow for any
  dataset question, so a bench run measures only the harness.
* FaultInjectingBackend degrades its replies according to what the
  lecture it received is missing: no context breeds wrong-target
  workflows, opaque argument names breed bad calls, and a missing code
  instruction breeds prose instead of code. Fault draws are seeded per
  question, so runs are reproducible.
* ContextReaderBackend is the answerer for the retrieval baseline: it
  reads the retrieved context like a literal-minded assistant: it can
  copy an entity or a value out of the context but does no arithmetic.

All three are deterministic; nothing here talks to a live model.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .baseline import DEFAULT_K_MULTI_FUND, DEFAULT_K_SINGLE_FUND, EmbeddingIndex, RetrievalBaseline
from .dataset import AnswerKind, QaItem, Tier
from .errors import BenchError, UnknownPromptError
from .evaluator import MethodUnderTest, score_item
from .gateway.types import ChatGateway, ChatMessage, ChatParams
from .lecture import API_SECTION_HEADER, LectureConfig, Variant, WAIT_INSTRUCTION
from .ncen.parsing import parse_entities, parse_value_items
from .orchestrator import SUMMARY_PROMPT, Orchestrator
from .templates import ENTITY_RELATIONS, VALUE_LABELS

CANNED_SUMMARY = (
    "The workflow looks up the relevant fund report(s), extracts the requested "
    "information from the fund block(s), and computes the final answer."
)

_REPAIR_MARKER = "The workflow code could not be run:"

PROSE_REPLY = (
    "I would look up the relevant fund report and read the requested "
    "information to answer your question"
)


def _fenced(code: str) -> str:
    return f"Here is the workflow:\n```\n{code}\n```"


class GoldenWorkflowBackend:
    """Replies to every dataset question with its reference workflow."""

    def __init__(self, items: list[QaItem]):
        from .golden import render_golden

        self._golden = {item.question: render_golden(item) for item in items}

    def _latest_question(self, history: list[ChatMessage]) -> str | None:
        for message in reversed(history):
            if message.role == "user" and message.content in self._golden:
                return message.content
        return None

    def chat(self, history: list[ChatMessage], params: ChatParams) -> str:
        if not history:
            raise ValueError("chat history must be non-empty")
        last = history[-1]
        if last.content == SUMMARY_PROMPT:
            return CANNED_SUMMARY
        question = self._latest_question(history)
        if question is None:
            from .gateway.scripted import prompt_hash

            raise UnknownPromptError(prompt_hash(history))
        return _fenced(self._golden[question])


@dataclass(frozen=True)
class FaultRates:
    full: float = 0.05
    nct: float = 0.30
    ba: float = 0.55
    ncp: float = 0.95


class FaultInjectingBackend:
    """Golden replies degraded according to the lecture's missing parts."""

    def __init__(self, items: list[QaItem], seed: int = 0, rates: FaultRates | None = None):
        from .golden import render_golden

        self.items = {item.question: item for item in items}
        self._golden = {item.question: render_golden(item) for item in items}
        self.seed = seed
        self.rates = rates or FaultRates()
        self._alternate_fund: dict[str, str] = {}
        questions = sorted(self.items)
        for question in questions:
            item = self.items[question]
            others = [
                q for q in questions
                if self.items[q].source_funds[0] != item.source_funds[0]
            ]
            pick = others[hash_stable(question) % len(others)] if others else question
            self._alternate_fund[question] = self.items[pick].source_funds[0]

    # -- lecture inspection ------------------------------------------------------

    @staticmethod
    def mechanism(lecture_text: str) -> str:
        if WAIT_INSTRUCTION in lecture_text or "fenced code block" not in lecture_text:
            return "NCP"
        if "fund_name" not in lecture_text:
            return "BA"
        if lecture_text.lstrip().startswith(API_SECTION_HEADER):
            return "NCT"
        return "FULL"

    def _fault_rate(self, mechanism: str) -> float:
        return {
            "FULL": self.rates.full,
            "NCT": self.rates.nct,
            "BA": self.rates.ba,
            "NCP": self.rates.ncp,
        }[mechanism]

    # -- reply construction ---------------------------------------------------------

    def _wrong_relation(self, item: QaItem, code: str) -> str:
        relation = item.relations[0]
        pool = ENTITY_RELATIONS if relation in ENTITY_RELATIONS else VALUE_LABELS
        alternatives = [r for r in pool if r != relation]
        wrong = alternatives[hash_stable(item.question) % len(alternatives)]
        return code.replace(f'"{relation}"', f'"{wrong}"', 1)

    def _wrong_target(self, item: QaItem, code: str) -> str:
        fund = item.source_funds[0]
        if f'"{fund}"' in code:
            return code.replace(f'"{fund}"', f'"{self._alternate_fund[item.question]}"')
        return self._wrong_relation(item, code)

    @staticmethod
    def _bad_args(code: str) -> str:
        return code + "\nanswer = get_report()"

    def _reply_for(self, question: str, mechanism: str, healed: bool) -> str:
        code = self._golden[question]
        if healed:
            return _fenced(code)
        rng = random.Random(f"{self.seed}:{mechanism}:{question}")
        if rng.random() >= self._fault_rate(mechanism):
            return _fenced(code)
        item = self.items[question]
        if mechanism == "NCP":
            return PROSE_REPLY
        if mechanism == "BA":
            return _fenced(self._bad_args(code))
        if mechanism == "NCT":
            if rng.random() < 0.5:
                return _fenced(self._wrong_target(item, code))
            return _fenced(self._wrong_relation(item, code))
        return _fenced(self._wrong_relation(item, code))

    def chat(self, history: list[ChatMessage], params: ChatParams) -> str:
        if not history:
            raise ValueError("chat history must be non-empty")
        last = history[-1]
        if last.content == SUMMARY_PROMPT:
            return CANNED_SUMMARY
        mechanism = self.mechanism(history[0].content)
        question = None
        for message in reversed(history):
            if message.role == "user" and message.content in self.items:
                question = message.content
                break
        if question is None:
            from .gateway.scripted import prompt_hash

            raise UnknownPromptError(prompt_hash(history))
        is_repair = last.content.startswith(_REPAIR_MARKER)
        is_feedback = (
            last.content != question
            and not is_repair
            and last.content != SUMMARY_PROMPT
        )
        # feedback clarifies intent; repair retries reproduce the same mistake
        return self._reply_for(question, mechanism, healed=is_feedback)


def hash_stable(text: str) -> int:
    import hashlib

    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:4], "big")


class ContextReaderBackend:
    """Answers retrieval-baseline prompts by copying from the context."""

    _QUESTION_RE = re.compile(r"Question: (?P<question>.*)\nAnswer:$", re.DOTALL)

    def chat(self, history: list[ChatMessage], params: ChatParams) -> str:
        prompt = history[-1].content
        m = self._QUESTION_RE.search(prompt)
        question = m.group("question").strip() if m else ""
        context = prompt.split("Question:", 1)[0]
        question_lower = question.lower()

        for relation in ENTITY_RELATIONS:
            if relation in question_lower:
                names = [
                    r.name for r in parse_entities(context) if r.label == relation
                ]
                if names:
                    return f"The {relation} is {names[0]}."
                return "The context does not mention that."
        values = {item.label.lower(): item.raw for item in parse_value_items(context)}
        for label in VALUE_LABELS + ("fund net assets",):
            if label in question_lower and label in values:
                return f"The {label} is {values[label]}."
        if values:
            first = next(iter(values.items()))
            return f"The {first[0]} is {first[1]}."
        return "I cannot find that in the context."


# -- method adapters -----------------------------------------------------------------


def flowmind_method(
    name: str,
    orchestrator: Orchestrator,
    lecture_cfg: LectureConfig,
    items: list[QaItem] | None = None,
    with_feedback: bool = False,
) -> MethodUnderTest:
    """Run one fresh session per question through the full loop."""
    by_question = {item.question: item for item in (items or [])}
    if with_feedback and not by_question:
        raise BenchError("feedback simulation needs the dataset items")

    def answer_fn(question: str) -> str:
        session = orchestrator.start_session(lecture_cfg)
        draft = orchestrator.ask(session, question)
        if with_feedback:
            item = by_question.get(question)
            good = draft.ok and item is not None and score_item(item, draft.answer_display)
            if item is not None and not good:
                draft = orchestrator.feedback(session, _feedback_hint(item))
        if not draft.ok:
            raise BenchError(draft.error or "workflow generation failed")
        return draft.answer_display

    return MethodUnderTest(name=name, answer_fn=answer_fn, config={"variant": lecture_cfg.variant.value})


def _feedback_hint(item: QaItem) -> str:
    funds = ", ".join(item.source_funds)
    relation = item.relations[0]
    kind = "names" if item.answer.kind is AnswerKind.ENTITIES else "value"
    return (
        f"That was not right. The question asks about the {relation} {kind} "
        f"for: {funds}. Please regenerate the workflow."
    )


def baseline_method(
    name: str,
    baseline: RetrievalBaseline,
    index: EmbeddingIndex,
    gateway: ChatGateway | None = None,
    items: list[QaItem] | None = None,
) -> MethodUnderTest:
    reader = gateway or ContextReaderBackend()
    multi_fund = {
        item.question for item in (items or []) if item.tier is Tier.HARD
    }

    def answer_fn(question: str) -> str:
        k = DEFAULT_K_MULTI_FUND if question in multi_fund else DEFAULT_K_SINGLE_FUND
        return baseline.ask(reader, index, question, k=k)

    return MethodUnderTest(name=name, answer_fn=answer_fn, config={})


def build_bench_methods(
    names: list[str],
    orchestrator_factory,
    items: list[QaItem],
    baseline: RetrievalBaseline | None = None,
    index: EmbeddingIndex | None = None,
    seed: int = 0,
    faulty: bool = False,
) -> list[MethodUnderTest]:
    """Resolve CLI method names into runnable methods.

    ``flowmind``/``flowmind+feedback`` use the golden backend unless
    ``faulty`` is set; the ablation methods always use the fault-injecting
    backend, since a perfect generator is immune to lecture quality.
    """
    methods = []
    golden_backend = GoldenWorkflowBackend(items)
    fault_backend = FaultInjectingBackend(items, seed=seed)
    for name in names:
        key = name.strip().lower()
        if key in ("flowmind", "flowmind+feedback"):
            backend = fault_backend if faulty else golden_backend
            methods.append(
                flowmind_method(
                    key,
                    orchestrator_factory(backend),
                    LectureConfig(variant=Variant.FULL),
                    items=items,
                    with_feedback=key.endswith("+feedback"),
                )
            )
        elif key in ("nct", "ba", "ncp"):
            methods.append(
                flowmind_method(
                    f"flowmind-{key}",
                    orchestrator_factory(fault_backend),
                    LectureConfig(variant=Variant(key.upper())),
                    items=items,
                )
            )
        elif key == "baseline":
            if baseline is None or index is None:
                raise BenchError("baseline method needs an embedding index")
            methods.append(baseline_method("baseline", baseline, index, items=items))
        else:
            raise BenchError(f"unknown method {name!r}")
    return methods
