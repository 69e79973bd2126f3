"""Mechanized tool verification.

A candidate tool implementation is driven through a fixed example corpus,
build examples first, then held-back validation examples, and every outcome
is compared against the reference toolset. The first divergence is recorded
with its full inputs so the caller can regenerate and retry. Built-in
mutants (small plausible bugs) exist to prove the corpus discriminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Protocol

from ..errors import GridWalkError
from ..toolset import _RELATION_PREDICATES, call_tool
from ..world import COLORS, SHAPES, Agent, GridWorld, Obj, Position, new_world, place_object, world_to_dict

BUILD_EXAMPLES = 3
VALIDATION_EXAMPLES = 5

_WIRE_FAILURES = ("endpoint-unreachable", "protocol-violation")


class ToolCandidate(Protocol):
    def load_world(self, world: GridWorld) -> None: ...

    def call(self, name: str, args: dict[str, Any]) -> Any: ...


class LocalCandidate:
    """In-process candidate: the reference registry plus optional overrides."""

    def __init__(self, overrides: dict[str, Callable[..., Any]] | None = None):
        self._overrides = dict(overrides or {})
        self._world: GridWorld | None = None

    def load_world(self, world: GridWorld) -> None:
        self._world = world

    def call(self, name: str, args: dict[str, Any]) -> Any:
        override = self._overrides.get(name)
        if override is not None:
            return override(self._world, **args)
        return call_tool(self._world, name, args)


def reference_candidate() -> LocalCandidate:
    return LocalCandidate()


@dataclass(frozen=True)
class ToolExample:
    world: GridWorld
    args: dict[str, Any]


@dataclass(frozen=True)
class Divergence:
    phase: str  # "build" | "validation"
    index: int
    world: dict[str, Any]
    args: dict[str, Any]
    expected: dict[str, Any]
    actual: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "phase": self.phase,
            "index": self.index,
            "world": self.world,
            "args": self.args,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass(frozen=True)
class VerificationReport:
    tool: str
    build_passed: int
    build_total: int
    validation_passed: int
    validation_total: int
    first_divergence: Divergence | None

    @property
    def passed(self) -> bool:
        return (
            self.build_passed == self.build_total
            and self.validation_passed == self.validation_total
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": self.tool,
            "build_passed": self.build_passed,
            "build_total": self.build_total,
            "validation_passed": self.validation_passed,
            "validation_total": self.validation_total,
            "passed": self.passed,
            "first_divergence": (
                self.first_divergence.to_dict() if self.first_divergence else None
            ),
        }


# --- example corpus ---------------------------------------------------------


def _world(objects: list[tuple[str, str, str, int, int, int]], d: int = 6) -> GridWorld:
    world = new_world(d, Agent(Position(0, 0), "south"))
    for oid, shape, color, size, row, col in objects:
        world = place_object(world, Obj(oid, shape, color, size, Position(row, col)))
    return world


def _attribute_world() -> GridWorld:
    return _world(
        [
            ("c1", "square", "red", 1, 0, 1),
            ("c2", "circle", "red", 2, 1, 1),
            ("c3", "circle", "green", 3, 2, 2),
            ("c4", "cylinder", "yellow", 2, 3, 3),
            ("c5", "box", "blue", 2, 4, 4),
        ]
    )


def _relationship_world() -> GridWorld:
    return _world(
        [
            ("a1", "circle", "red", 1, 2, 3),
            ("a2", "square", "blue", 2, 2, 5),
            ("a3", "cylinder", "green", 3, 4, 3),
            ("a4", "box", "yellow", 3, 0, 0),
            ("a5", "square", "red", 1, 1, 1),
            ("a6", "circle", "blue", 2, 5, 5),
        ]
    )


def _size_world() -> GridWorld:
    return _world(
        [
            ("d1", "circle", "red", 1, 0, 0),
            ("d2", "square", "blue", 3, 1, 1),
            ("d3", "circle", "green", 3, 2, 2),
            ("d4", "cylinder", "yellow", 2, 3, 3),
            ("d5", "square", "red", 2, 4, 4),
        ]
    )


def _unique_world() -> GridWorld:
    return _world(
        [
            ("e1", "circle", "red", 1, 0, 0),
            ("e2", "square", "blue", 2, 1, 1),
            ("e3", "cylinder", "green", 3, 2, 2),
        ]
    )


def verification_examples(tool_name: str) -> tuple[list[ToolExample], list[ToolExample]]:
    """The fixed (build, validation) corpus for one tool: 3 + 5 examples."""
    wa, wr, ws, wu = _attribute_world(), _relationship_world(), _size_world(), _unique_world()
    all_a = ["c1", "c2", "c3", "c4", "c5"]
    corpora: dict[str, tuple[list[ToolExample], list[ToolExample]]] = {
        "filter_by_attribute": (
            [
                ToolExample(wa, {"objects": all_a, "kind": "color", "value": "red"}),
                ToolExample(wa, {"objects": all_a, "kind": "shape", "value": "circle"}),
                ToolExample(wa, {"objects": ["c1", "c3"], "kind": "color", "value": "green"}),
            ],
            [
                ToolExample(wa, {"objects": all_a, "kind": "shape", "value": "object"}),
                ToolExample(wa, {"objects": all_a, "kind": "shape", "value": "box"}),
                ToolExample(wa, {"objects": [], "kind": "color", "value": "blue"}),
                ToolExample(wa, {"objects": all_a, "kind": "color", "value": "blue"}),
                ToolExample(wa, {"objects": all_a, "kind": "color", "value": "glorp"}),
            ],
        ),
        "filter_relationship": (
            [
                ToolExample(
                    wr,
                    {"head_objects": ["a1"], "condition": "same_row", "tail_objects": ["a2"]},
                ),
                ToolExample(
                    wr,
                    {"head_objects": ["a1"], "condition": "same_column", "tail_objects": ["a3"]},
                ),
                ToolExample(
                    wr,
                    {"head_objects": ["a5"], "condition": "inside_of", "tail_objects": ["a4"]},
                ),
            ],
            [
                ToolExample(
                    wr,
                    {"head_objects": ["a1"], "condition": "same_row", "tail_objects": ["a1"]},
                ),
                ToolExample(
                    wr,
                    {"head_objects": ["a1"], "condition": "same_row", "tail_objects": ["a3"]},
                ),
                ToolExample(
                    wr,
                    {
                        "head_objects": ["a1", "a6"],
                        "condition": "same_color",
                        "tail_objects": ["a5"],
                    },
                ),
                ToolExample(
                    wr,
                    {"head_objects": ["a2"], "condition": "same_size", "tail_objects": ["a6"]},
                ),
                ToolExample(
                    wr,
                    {
                        "head_objects": ["a3"],
                        "condition": "same_shape",
                        "tail_objects": ["a1", "a6"],
                    },
                ),
            ],
        ),
        "filter_size": (
            [
                ToolExample(ws, {"objects": ["d1", "d2", "d3"], "size_word": "small"}),
                ToolExample(ws, {"objects": ["d2", "d3"], "size_word": "big"}),
                ToolExample(ws, {"objects": ["d4"], "size_word": "small"}),
            ],
            [
                ToolExample(ws, {"objects": [], "size_word": "small"}),
                ToolExample(ws, {"objects": ["d1", "d4", "d5"], "size_word": "big"}),
                ToolExample(ws, {"objects": ["d1", "d2", "d3", "d4", "d5"], "size_word": "big"}),
                ToolExample(ws, {"objects": ["d1", "d2"], "size_word": "big"}),
                ToolExample(ws, {"objects": ["d1", "d2"], "size_word": "small"}),
            ],
        ),
        "unique_target": (
            [
                ToolExample(wu, {"objects": ["e1"]}),
                ToolExample(wu, {"objects": []}),
                ToolExample(wu, {"objects": ["e1", "e2"]}),
            ],
            [
                ToolExample(wu, {"objects": ["e3"]}),
                ToolExample(wu, {"objects": ["e1", "e2", "e3"]}),
                ToolExample(wu, {"objects": ["e2"]}),
                ToolExample(wu, {"objects": ["e1", "e3"]}),
                ToolExample(wu, {"objects": ["e1"]}),
            ],
        ),
    }
    if tool_name not in corpora:
        raise GridWalkError("unknown-tool", f"no verification corpus for {tool_name!r}")
    build, validation = corpora[tool_name]
    assert len(build) == BUILD_EXAMPLES and len(validation) == VALIDATION_EXAMPLES
    return build, validation


# --- verification loop --------------------------------------------------------


def _outcome(run: Callable[[], Any]) -> dict[str, Any]:
    try:
        return {"ok": run()}
    except GridWalkError as exc:
        if exc.code in _WIRE_FAILURES:
            raise
        return {"error": exc.code}


def verify_tool(
    candidate: ToolCandidate,
    tool_name: str,
    build_examples: list[ToolExample] | None = None,
    validation_examples: list[ToolExample] | None = None,
) -> VerificationReport:
    """Run a candidate against the reference on the tool's example corpus.

    Each phase stops at its first divergence. The report passes only when
    all build and all validation examples agree. A candidate that breaks
    the wire (unreachable, malformed replies) raises instead, with the
    phase recorded in the error data.
    """
    default_build, default_validation = verification_examples(tool_name)
    phases = (
        ("build", build_examples if build_examples is not None else default_build),
        (
            "validation",
            validation_examples if validation_examples is not None else default_validation,
        ),
    )
    reference = LocalCandidate()
    passed = {"build": 0, "validation": 0}
    first_divergence: Divergence | None = None
    for phase, examples in phases:
        for index, example in enumerate(examples):

            def run(agent: ToolCandidate) -> Any:
                agent.load_world(example.world)
                return agent.call(tool_name, example.args)

            expected = _outcome(lambda: run(reference))
            try:
                actual = _outcome(lambda: run(candidate))
            except GridWalkError as exc:
                raise GridWalkError(
                    exc.code, exc.message, phase=phase, index=index, **exc.data
                ) from exc
            if actual != expected:
                first_divergence = Divergence(
                    phase=phase,
                    index=index,
                    world=world_to_dict(example.world),
                    args=example.args,
                    expected=expected,
                    actual=actual,
                )
                break
            passed[phase] += 1
        if first_divergence is not None:
            break
    return VerificationReport(
        tool=tool_name,
        build_passed=passed["build"],
        build_total=len(phases[0][1]),
        validation_passed=passed["validation"],
        validation_total=len(phases[1][1]),
        first_divergence=first_divergence,
    )


# --- built-in mutants ---------------------------------------------------------


def _bind(world: GridWorld, ids) -> list[Obj]:
    objs = sorted((world.object_by_id(i) for i in ids), key=lambda o: o.id)
    return objs


def _mutant_relation_swap(world, head_objects, condition, tail_objects):
    # confuses rows with columns
    swapped = {"same_row": "same_column", "same_column": "same_row"}.get(condition, condition)
    pred = _RELATION_PREDICATES[swapped]
    heads, tails = _bind(world, head_objects), _bind(world, tail_objects)
    return [h.id for h in heads if any(t.id != h.id and pred(h, t) for t in tails)]


def _mutant_no_self_exclusion(world, head_objects, condition, tail_objects):
    # lets an object witness its own relation
    pred = _RELATION_PREDICATES[condition]
    heads, tails = _bind(world, head_objects), _bind(world, tail_objects)
    return [h.id for h in heads if any(pred(h, t) for t in tails)]


def _mutant_tail_ignored(world, head_objects, condition, tail_objects):
    # checks the condition against the whole world instead of the tail set
    pred = _RELATION_PREDICATES[condition]
    heads = _bind(world, head_objects)
    return [
        h.id
        for h in heads
        if any(t.id != h.id and pred(h, t) for t in world.objects)
    ]


def _mutant_size_word_swap(world, objects, size_word):
    # small keeps the biggest, big keeps the smallest
    if size_word not in ("small", "big"):
        raise GridWalkError("unknown-attribute-value", f"unknown size word {size_word!r}")
    objs = _bind(world, objects)
    if not objs:
        return []
    pick = max if size_word == "small" else min
    bound = pick(o.size for o in objs)
    return [o.id for o in objs if o.size == bound]


def _mutant_attribute_kind_swap(world, objects, kind, value):
    # compares colors against shapes and shapes against colors
    objs = _bind(world, objects)
    if kind == "color":
        if value not in COLORS:
            raise GridWalkError("unknown-attribute-value", f"unknown color {value!r}")
        return [o.id for o in objs if o.shape == value]
    if kind == "shape":
        if value not in SHAPES + ("object",):
            raise GridWalkError("unknown-attribute-value", f"unknown shape {value!r}")
        return [o.id for o in objs if value == "object" or o.color == value]
    raise GridWalkError("unknown-attribute-value", f"unknown attribute kind {kind!r}")


def _mutant_wildcard_ignored(world, objects, kind, value):
    # treats the wildcard noun as a literal shape name
    objs = _bind(world, objects)
    if kind == "color":
        if value not in COLORS:
            raise GridWalkError("unknown-attribute-value", f"unknown color {value!r}")
        return [o.id for o in objs if o.color == value]
    if kind == "shape":
        if value not in SHAPES + ("object",):
            raise GridWalkError("unknown-attribute-value", f"unknown shape {value!r}")
        return [o.id for o in objs if o.shape == value]
    raise GridWalkError("unknown-attribute-value", f"unknown attribute kind {kind!r}")


MUTANTS: dict[str, tuple[str, Callable[..., Any]]] = {
    "relation-swap": ("filter_relationship", _mutant_relation_swap),
    "no-self-exclusion": ("filter_relationship", _mutant_no_self_exclusion),
    "tail-ignored": ("filter_relationship", _mutant_tail_ignored),
    "size-word-swap": ("filter_size", _mutant_size_word_swap),
    "attribute-kind-swap": ("filter_by_attribute", _mutant_attribute_kind_swap),
    "wildcard-ignored": ("filter_by_attribute", _mutant_wildcard_ignored),
}


def mutant_names() -> list[str]:
    return list(MUTANTS)


def mutant_candidate(name: str) -> tuple[str, LocalCandidate]:
    """The tool a mutant applies to, plus a candidate running that mutant."""
    try:
        tool, fn = MUTANTS[name]
    except KeyError:
        raise GridWalkError("unknown-tool", f"unknown mutant {name!r}") from None
    return tool, LocalCandidate({tool: fn})
