"""Prompt packs: one plain-text document holding everything a text-only
agent needs to answer a question, worked examples included."""

from __future__ import annotations

import re

from ..benchgen import Episode
from ..errors import GridWalkError
from ..language import Lexicon
from ..resolver import compile_command, render_demonstration
from ..toolset import describe_tools
from ..world import serialize_world

TASK_INSTRUCTION = """\
You are given a grid world and a question that names exactly one object in it.
Find that object by calling the tools one step at a time. Start from the
binding all_objects, narrow it with filter_by_attribute, filter_relationship,
and filter_size, and always pass earlier results by their binding name
(x1, x2, ...). Apply a size word only after every other restriction on its
noun phrase, because small and big are judged relative to the set that
remains. Finish with unique_target; its result is your answer."""


def _tool_section() -> str:
    lines: list[str] = []
    for desc in describe_tools():
        lines.append(desc.signature())
        lines.append(f"  {desc.purpose}")
        for arg in desc.args:
            lines.append(f"  {arg.name} ({arg.type}): {arg.description}")
    return "\n".join(lines)


def emit_prompt_pack(
    demonstrations: list[Episode],
    test_episode: Episode,
    lexicon: Lexicon | None = None,
    k: int = 3,
) -> str:
    """Assemble the document: tool set, instruction, k demonstrations, question."""
    if k < 1:
        raise GridWalkError("invalid-params", f"need at least one demonstration, got k={k}")
    if len(demonstrations) < k:
        raise GridWalkError(
            "invalid-params",
            f"need {k} demonstration episodes, got {len(demonstrations)}",
        )
    blocks = [
        f"=== tool set ===\n{_tool_section()}",
        f"=== task instruction ===\n{TASK_INSTRUCTION}",
    ]
    for i, episode in enumerate(demonstrations[:k], start=1):
        if episode.ast is None:
            raise GridWalkError(
                "invalid-params",
                "demonstration episodes must carry parsed questions",
                episode_id=episode.episode_id,
            )
        worked = render_demonstration(
            episode.ast, episode.world, compile_command(episode.ast), lexicon
        ).rstrip("\n")
        blocks.append(f"=== demonstration {i} ===\n{worked}")
    blocks.append(
        "=== test question ===\n"
        f"world: {serialize_world(test_episode.world)}\n"
        f"question: {test_episode.question}"
    )
    return "\n\n".join(blocks) + "\n"


_HEADER = re.compile(r"^=== (.+?) ===$", re.MULTILINE)


def split_prompt_pack(text: str) -> dict:
    """Parse a pack back into its sections.

    Returns {"tools", "instruction", "demonstrations": [...], "test"}.
    """
    parts = _HEADER.split(text)
    if parts[0].strip():
        raise GridWalkError("malformed-document", "text before the first section header")
    tools = instruction = test = None
    demonstrations: list[str] = []
    for name, body in zip(parts[1::2], parts[2::2]):
        body = body.strip("\n")
        if name == "tool set":
            tools = body
        elif name == "task instruction":
            instruction = body
        elif name.startswith("demonstration "):
            suffix = name.removeprefix("demonstration ")
            if not suffix.isdigit() or int(suffix) != len(demonstrations) + 1:
                raise GridWalkError(
                    "malformed-document", f"demonstrations out of order at {name!r}"
                )
            demonstrations.append(body)
        elif name == "test question":
            test = body
        else:
            raise GridWalkError("malformed-document", f"unknown section {name!r}")
    if tools is None or instruction is None or test is None or not demonstrations:
        raise GridWalkError("malformed-document", "pack is missing required sections")
    return {
        "tools": tools,
        "instruction": instruction,
        "demonstrations": demonstrations,
        "test": test,
    }
