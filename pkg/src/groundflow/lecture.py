"""Lecture prompt rendering: context, API descriptions, code instruction.

The full lecture primes the model with three parts in a fixed order. Three
degraded variants exist for ablation runs: NCT drops the context
paragraph, BA renders every function's own argument names as opaque
letters (x, y, z, w, x1, ...) throughout that function's stanza, and NCP
swaps the code instruction for a passive wait-for-queries sentence.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, replace
from pathlib import Path


class Variant(enum.Enum):
    FULL = "FULL"
    NCT = "NCT"
    BA = "BA"
    NCP = "NCP"


@dataclass(frozen=True)
class ApiDescriptor:
    name: str
    params: tuple[tuple[str, str], ...]
    returns_description: str


@dataclass(frozen=True)
class LectureConfig:
    context_text: str = ""
    code_instruction: str = ""
    variant: Variant = Variant.FULL

    def resolved(self) -> "LectureConfig":
        cfg = self
        if not cfg.context_text:
            cfg = replace(cfg, context_text=DEFAULT_CONTEXT)
        if not cfg.code_instruction:
            cfg = replace(cfg, code_instruction=DEFAULT_CODE_INSTRUCTION)
        return cfg


@dataclass(frozen=True)
class LecturePrompt:
    text: str
    registry_snapshot: tuple[ApiDescriptor, ...]
    variant: Variant = Variant.FULL


DEFAULT_CONTEXT = (
    "You will handle information queries from users about funds in N-CEN reports."
)

API_SECTION_HEADER = "You can use the following functions:"

DEFAULT_CODE_INSTRUCTION = """\
When you receive a user query, reply with workflow code that computes the answer, \
written in the workflow language below and enclosed in a fenced code block. \
Assign the final result to a variable named answer.

Workflow language reference:
    name = expression                  assignment
    for item in list_value { ... }     loop over a list
    if a == b { ... } else { ... }     conditional; comparisons: == != < > <= >=
    arithmetic: + - * /                numbers are 64-bit floats
    "text", 12.5, [a, b, c], xs[0]     strings, numbers, lists, list indexing
    builtins: sum len round min max str num append unique sort

Only the functions listed above and these builtins may be called."""

WAIT_INSTRUCTION = (
    "Wait for user queries, then try to use these functions to respond assuming "
    "you have access to these functions. Let me know once you are ready for user "
    "queries."
)

_OPAQUE_LETTERS = ("x", "y", "z", "w")


def opaque_names(count: int) -> list[str]:
    names = list(_OPAQUE_LETTERS[:count])
    for i in range(len(names), count):
        names.append(f"x{i - len(_OPAQUE_LETTERS) + 1}")
    return names


def describe_api(descriptor: ApiDescriptor, variant: Variant) -> str:
    """One stanza: signature line, parameter lines, returns line."""
    param_names = [name for name, _ in descriptor.params]
    shown = param_names
    rename: dict[str, str] = {}
    if variant is Variant.BA:
        shown = opaque_names(len(param_names))
        rename = dict(zip(param_names, shown))

    def sub(text: str) -> str:
        for original, opaque in rename.items():
            text = re.sub(rf"\b{re.escape(original)}\b", opaque, text)
        return text

    lines = [f"{descriptor.name}({', '.join(shown)})"]
    for (name, desc), shown_name in zip(descriptor.params, shown):
        lines.append(f"    {shown_name}: {sub(desc)}")
    lines.append(f"    {sub(descriptor.returns_description)}")
    return "\n".join(lines)


def render_lecture(
    registry: list[ApiDescriptor] | tuple[ApiDescriptor, ...],
    cfg: LectureConfig,
) -> LecturePrompt:
    if not registry:
        raise ValueError("cannot render a lecture for an empty API registry")
    cfg = cfg.resolved()
    api_section = "\n\n".join(
        [API_SECTION_HEADER] + [describe_api(d, cfg.variant) for d in registry]
    )
    instruction = cfg.code_instruction
    if cfg.variant is Variant.NCP:
        instruction = WAIT_INSTRUCTION
    parts = [api_section, instruction]
    if cfg.variant is not Variant.NCT:
        parts.insert(0, cfg.context_text)
    return LecturePrompt(
        text="\n\n".join(parts),
        registry_snapshot=tuple(registry),
        variant=cfg.variant,
    )


def load_registry(path: str | Path) -> list[ApiDescriptor]:
    """Read descriptors from the declarative registry file."""
    entries = json.loads(Path(path).read_text(encoding="utf-8"))
    registry = []
    seen: set[str] = set()
    for entry in entries:
        name = entry["name"]
        if name in seen:
            raise ValueError(f"duplicate API name in registry: {name}")
        seen.add(name)
        registry.append(
            ApiDescriptor(
                name=name,
                params=tuple((p["name"], p["desc"]) for p in entry.get("params", [])),
                returns_description=entry["returns"],
            )
        )
    return registry
