"""Compile questions into tool programs and execute them over a world.

A ToolProgram is a straight-line listing of tool calls: arguments are either
literals or references to the output binding of an earlier step. Programs
start from the implicit binding "all_objects" (every id in the world) and
end with a unique_target step bound to "target".

denote_brute_force() is an independent check: it computes a referent's
denotation with plain nested loops and inline geometry, never touching the
toolset, so the two routes can be compared on arbitrary inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import GridWalkError
from .language import (
    CommandAst,
    Lexicon,
    ReferentAst,
    annotate,
    clause_count,
    render,
)
from .toolset import all_objects, call_tool
from .world import GridWorld, Obj, serialize_world


@dataclass(frozen=True)
class Ref:
    """Reference to the output binding of an earlier step."""

    name: str


@dataclass(frozen=True)
class ToolCall:
    tool: str
    args: tuple[tuple[str, Any], ...]  # ordered (name, literal-or-Ref) pairs
    output: str
    comment: str = ""


@dataclass(frozen=True)
class ToolProgram:
    steps: tuple[ToolCall, ...]
    target: str = "target"


def compile_command(ast: CommandAst) -> ToolProgram:
    """Lower a command AST to a tool program, deepest referent first.

    Each referent becomes a pipeline: shape filter, then color filter if
    present, then one relationship filter per clause (tails already bound),
    then the size filter last. The referent's step annotation rides on the
    first call of its pipeline. The top-level pipeline ends in unique_target.
    """
    annotations = annotate(ast)
    steps: list[ToolCall] = []
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"x{counter[0]}"

    def emit(ref: ReferentAst, num: int) -> str:
        starts = []
        nxt = num + 1
        for clause in ref.clauses:
            starts.append(nxt)
            nxt += clause_count(clause.tail) + 1
        tail_bindings = [
            emit(clause.tail, start) for clause, start in zip(ref.clauses, starts)
        ]
        comment = annotations[num - 1]
        current = "all_objects"

        def push(tool: str, args: tuple[tuple[str, Any], ...]) -> None:
            nonlocal comment, current
            out = fresh()
            steps.append(ToolCall(tool, args, out, comment))
            comment = ""
            current = out

        push(
            "filter_by_attribute",
            (("objects", Ref(current)), ("kind", "shape"), ("value", ref.noun)),
        )
        if ref.color is not None:
            push(
                "filter_by_attribute",
                (("objects", Ref(current)), ("kind", "color"), ("value", ref.color)),
            )
        for clause, binding in zip(ref.clauses, tail_bindings):
            push(
                "filter_relationship",
                (
                    ("head_objects", Ref(current)),
                    ("condition", clause.relation),
                    ("tail_objects", Ref(binding)),
                ),
            )
        if ref.size_word is not None:
            push("filter_size", (("objects", Ref(current)), ("size_word", ref.size_word)))
        return current

    final = emit(ast.target, 1)
    steps.append(ToolCall("unique_target", (("objects", Ref(final)),), "target"))
    return ToolProgram(tuple(steps))


def execute(program: ToolProgram, world: GridWorld) -> Any:
    """Run a program through the tool registry; returns the target binding."""
    env: dict[str, Any] = {"all_objects": all_objects(world)}
    for step in program.steps:
        args: dict[str, Any] = {}
        for name, value in step.args:
            if isinstance(value, Ref):
                if value.name not in env:
                    raise GridWalkError(
                        "unknown-binding", f"step {step.output} references {value.name!r}"
                    )
                args[name] = env[value.name]
            else:
                args[name] = value
        env[step.output] = call_tool(world, step.tool, args)
    if program.target not in env:
        raise GridWalkError("unknown-binding", f"program never binds {program.target!r}")
    return env[program.target]


# --- independent denotation oracle ---------------------------------------


def _holds(relation: str, head: Obj, tail: Obj) -> bool:
    # deliberately spelled out; must not call into the toolset
    if relation == "same_row":
        return head.position.row == tail.position.row
    if relation == "same_column":
        return head.position.col == tail.position.col
    if relation == "same_color":
        return head.color == tail.color
    if relation == "same_shape":
        return head.shape == tail.shape
    if relation == "same_size":
        return head.size == tail.size
    if relation == "inside_of":
        return (
            tail.shape == "box"
            and tail.position.row <= head.position.row < tail.position.row + tail.size
            and tail.position.col <= head.position.col < tail.position.col + tail.size
        )
    raise GridWalkError("unknown-relation", f"unknown relation {relation!r}")


def denote_brute_force(ast: CommandAst | ReferentAst, world: GridWorld) -> list[str]:
    """Denotation of a referent by exhaustive scan, sorted by id."""
    ref = ast.target if isinstance(ast, CommandAst) else ast
    tail_sets = [denote_brute_force(clause.tail, world) for clause in ref.clauses]
    satisfying: list[Obj] = []
    for obj in world.objects:
        if ref.noun != "object" and obj.shape != ref.noun:
            continue
        if ref.color is not None and obj.color != ref.color:
            continue
        ok = True
        for clause, tail_ids in zip(ref.clauses, tail_sets):
            witnesses = [t for t in tail_ids if t != obj.id]
            if not any(
                _holds(clause.relation, obj, world.object_by_id(t)) for t in witnesses
            ):
                ok = False
                break
        if ok:
            satisfying.append(obj)
    if ref.size_word is not None and satisfying:
        sizes = [o.size for o in satisfying]
        bound = min(sizes) if ref.size_word == "small" else max(sizes)
        satisfying = [o for o in satisfying if o.size == bound]
    return sorted(o.id for o in satisfying)


# --- program serialization -------------------------------------------------


def _encode_arg(value: Any) -> Any:
    if isinstance(value, Ref):
        return {"ref": value.name}
    return value


def _decode_arg(value: Any) -> Any:
    if isinstance(value, dict):
        if set(value) != {"ref"} or not isinstance(value["ref"], str):
            raise GridWalkError("malformed-program", f"bad argument encoding {value!r}")
        return Ref(value["ref"])
    return value


def program_to_dict(program: ToolProgram) -> dict[str, Any]:
    return {
        "steps": [
            {
                "tool": s.tool,
                "args": {name: _encode_arg(v) for name, v in s.args},
                "output": s.output,
                "comment": s.comment,
            }
            for s in program.steps
        ],
        "target": program.target,
    }


def program_from_dict(doc: Any) -> ToolProgram:
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise GridWalkError("malformed-program", "program document needs a 'steps' list")
    steps = []
    for i, entry in enumerate(doc["steps"]):
        if not isinstance(entry, dict):
            raise GridWalkError("malformed-program", f"steps[{i}] must be an object")
        for key in ("tool", "args", "output"):
            if key not in entry:
                raise GridWalkError("malformed-program", f"steps[{i}] is missing {key!r}")
        if not isinstance(entry["args"], dict):
            raise GridWalkError("malformed-program", f"steps[{i}] args must be an object")
        args = tuple(
            (name, _decode_arg(value)) for name, value in entry["args"].items()
        )
        steps.append(
            ToolCall(entry["tool"], args, entry["output"], entry.get("comment", ""))
        )
    target = doc.get("target", "target")
    if not isinstance(target, str):
        raise GridWalkError("malformed-program", "program target must be a string")
    return ToolProgram(tuple(steps), target)


def _format_value(value: Any) -> str:
    if isinstance(value, Ref):
        return value.name
    return json.dumps(value)


def format_program(program: ToolProgram) -> str:
    """Code-style listing: comment line above each annotated call."""
    lines: list[str] = []
    for step in program.steps:
        if step.comment:
            lines.append(f"# {step.comment}")
        rendered = ", ".join(f"{name}={_format_value(v)}" for name, v in step.args)
        lines.append(f"{step.output} = {step.tool}({rendered})")
    return "\n".join(lines)


def render_demonstration(
    ast: CommandAst,
    world: GridWorld,
    program: ToolProgram,
    lexicon: Lexicon | None = None,
) -> str:
    """Deterministic worked example: world, question, program listing, answer."""
    answer = execute(program, world)
    parts = [
        f"world: {serialize_world(world)}",
        f"question: {render(ast, lexicon)}",
        format_program(program),
        f"answer: {answer}",
    ]
    return "\n".join(parts) + "\n"
