"""Composable object-set filters and the tool registry.

Object sets travel as lists of object ids in stable order (sorted by id).
Every filter returns a subset of its input set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .errors import GridWalkError, ResolutionError
from .language import RELATIONS, SIZE_WORDS, WILDCARD_NOUN
from .world import COLORS, SHAPES, GridWorld, Obj, covers


def all_objects(world: GridWorld) -> list[str]:
    """Every object id in the world, sorted."""
    return sorted(o.id for o in world.objects)


def _bind(world: GridWorld, ids: Iterable[str]) -> list[Obj]:
    seen: set[str] = set()
    objs: list[Obj] = []
    for obj_id in ids:
        if obj_id in seen:
            raise GridWalkError("invalid-object-set", f"duplicate object id {obj_id!r}")
        seen.add(obj_id)
        objs.append(world.object_by_id(obj_id))
    objs.sort(key=lambda o: o.id)
    return objs


def filter_by_attribute(
    world: GridWorld, objects: Iterable[str], kind: str, value: str
) -> list[str]:
    """Keep objects whose color or shape equals ``value``.

    The wildcard shape value "object" matches every shape.
    """
    objs = _bind(world, objects)
    if kind == "color":
        if value not in COLORS:
            raise GridWalkError("unknown-attribute-value", f"unknown color {value!r}")
        return [o.id for o in objs if o.color == value]
    if kind == "shape":
        if value not in SHAPES + (WILDCARD_NOUN,):
            raise GridWalkError("unknown-attribute-value", f"unknown shape {value!r}")
        return [o.id for o in objs if value == WILDCARD_NOUN or o.shape == value]
    raise GridWalkError("unknown-attribute-value", f"unknown attribute kind {kind!r}")


_RELATION_PREDICATES: dict[str, Callable[[Obj, Obj], bool]] = {
    "same_row": lambda h, t: h.position.row == t.position.row,
    "same_column": lambda h, t: h.position.col == t.position.col,
    "same_color": lambda h, t: h.color == t.color,
    "same_shape": lambda h, t: h.shape == t.shape,
    "same_size": lambda h, t: h.size == t.size,
    "inside_of": lambda h, t: t.shape == "box" and covers(t, h.position),
}

assert set(_RELATION_PREDICATES) == set(RELATIONS)


def filter_relationship(
    world: GridWorld,
    head_objects: Iterable[str],
    condition: str,
    tail_objects: Iterable[str],
) -> list[str]:
    """Keep heads that stand in ``condition`` to at least one tail.

    An object never relates to itself: a head is kept only by a distinct
    witness in the tail set.
    """
    heads = _bind(world, head_objects)
    tails = _bind(world, tail_objects)
    try:
        pred = _RELATION_PREDICATES[condition]
    except KeyError:
        raise GridWalkError("unknown-relation", f"unknown relation {condition!r}") from None
    return [h.id for h in heads if any(t.id != h.id and pred(h, t) for t in tails)]


def filter_size(world: GridWorld, objects: Iterable[str], size_word: str) -> list[str]:
    """Keep the smallest ("small") or largest ("big") objects of the input set.

    Relative to the input set only; ties are all kept; empty in, empty out.
    """
    if size_word not in SIZE_WORDS:
        raise GridWalkError("unknown-attribute-value", f"unknown size word {size_word!r}")
    objs = _bind(world, objects)
    if not objs:
        return []
    pick = min if size_word == "small" else max
    bound = pick(o.size for o in objs)
    return [o.id for o in objs if o.size == bound]


def unique_target(objects: Iterable[str]) -> str:
    """The single id in the set; anything else is a resolution failure."""
    ids = list(objects)
    if not ids:
        raise ResolutionError("no-target", "no object satisfies the description")
    if len(ids) > 1:
        raise ResolutionError(
            "ambiguous-target",
            f"{len(ids)} candidates remain",
            candidates=sorted(ids),
        )
    return ids[0]


@dataclass(frozen=True)
class ArgSpec:
    name: str
    type: str
    description: str

    def to_dict(self) -> dict[str, str]:
        return {"name": self.name, "type": self.type, "description": self.description}


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    args: tuple[ArgSpec, ...]
    output: str
    purpose: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "args": [a.to_dict() for a in self.args],
            "output": self.output,
            "purpose": self.purpose,
        }

    def signature(self) -> str:
        return f"{self.name}({', '.join(a.name for a in self.args)}) -> {self.output}"


_DESCRIPTORS: tuple[ToolDescriptor, ...] = (
    ToolDescriptor(
        "filter_by_attribute",
        (
            ArgSpec("objects", "object-ids", "candidate object ids"),
            ArgSpec("kind", "attribute-kind", '"color" or "shape"'),
            ArgSpec(
                "value",
                "attribute-value",
                'a color or shape name; shape "object" matches any shape',
            ),
        ),
        "object-ids",
        "keep the objects whose color or shape equals the given value",
    ),
    ToolDescriptor(
        "filter_relationship",
        (
            ArgSpec("head_objects", "object-ids", "candidates to keep or drop"),
            ArgSpec(
                "condition",
                "relation",
                "one of same_row, same_column, same_color, same_shape, same_size, inside_of",
            ),
            ArgSpec("tail_objects", "object-ids", "witness set the condition is checked against"),
        ),
        "object-ids",
        "keep each head that stands in the condition to at least one distinct tail object",
    ),
    ToolDescriptor(
        "filter_size",
        (
            ArgSpec("objects", "object-ids", "candidate object ids"),
            ArgSpec("size_word", "size-word", '"small" keeps the minimum size, "big" the maximum'),
        ),
        "object-ids",
        "keep the smallest or largest objects of the input set, ties included",
    ),
    ToolDescriptor(
        "unique_target",
        (ArgSpec("objects", "object-ids", "final candidate set"),),
        "object-id",
        "return the single remaining object id; fails on zero or several candidates",
    ),
)


def describe_tools() -> list[ToolDescriptor]:
    """Descriptors for every tool, in stable order."""
    return list(_DESCRIPTORS)


def descriptor(name: str) -> ToolDescriptor:
    for d in _DESCRIPTORS:
        if d.name == name:
            return d
    raise GridWalkError("unknown-tool", f"unknown tool {name!r}")


_TOOLS: dict[str, Callable[..., Any]] = {
    "filter_by_attribute": filter_by_attribute,
    "filter_relationship": filter_relationship,
    "filter_size": filter_size,
}


def call_tool(world: GridWorld | None, name: str, args: dict[str, Any]) -> list[str] | str:
    """Dispatch one tool call through the registry, validating arg names."""
    desc = descriptor(name)
    expected = [a.name for a in desc.args]
    if sorted(args) != sorted(expected):
        raise GridWalkError(
            "invalid-params",
            f"{name} expects arguments {expected}, got {sorted(args)}",
        )
    if name == "unique_target":
        return unique_target(args["objects"])
    if world is None:
        raise GridWalkError("no-world-loaded", f"{name} needs a bound world")
    return _TOOLS[name](world, **args)
