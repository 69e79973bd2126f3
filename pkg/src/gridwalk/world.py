"""Immutable grid-world model.

A world is a d x d grid holding attributed objects and a single agent.
Row 0 is the top edge and column 0 the left edge; rows grow downward.
A box of size s anchored at (r, c) covers the s x s block whose top-left
cell is (r, c); every other shape occupies only its anchor cell. Boxes may
share cells with non-box objects (containment); any other overlap is a
collision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from .errors import GridWalkError

SHAPES = ("circle", "square", "cylinder", "box")
COLORS = ("red", "blue", "green", "yellow")
ORIENTATIONS = ("north", "east", "south", "west")
SIZE_RANGE = (1, 4)
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Position:
    row: int
    col: int

    def __post_init__(self) -> None:
        if self.row < 0 or self.col < 0:
            raise GridWalkError(
                "invariant-violation",
                f"position ({self.row}, {self.col}) has a negative coordinate",
            )


@dataclass(frozen=True)
class Obj:
    """An attributed object; ``size`` is visual size, 1 through 4."""

    id: str
    shape: str
    color: str
    size: int
    position: Position

    def __post_init__(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise GridWalkError("invariant-violation", "object id must be a non-empty string")
        if self.shape not in SHAPES:
            raise GridWalkError("invariant-violation", f"unknown shape {self.shape!r}")
        if self.color not in COLORS:
            raise GridWalkError("invariant-violation", f"unknown color {self.color!r}")
        if not SIZE_RANGE[0] <= self.size <= SIZE_RANGE[1]:
            raise GridWalkError(
                "invariant-violation",
                f"size {self.size} outside [{SIZE_RANGE[0]}, {SIZE_RANGE[1]}]",
            )


@dataclass(frozen=True)
class Agent:
    position: Position
    orientation: str

    def __post_init__(self) -> None:
        if self.orientation not in ORIENTATIONS:
            raise GridWalkError(
                "invariant-violation", f"unknown orientation {self.orientation!r}"
            )


@dataclass(frozen=True)
class GridWorld:
    d: int
    objects: tuple[Obj, ...]
    agent: Agent

    @cached_property
    def _by_id(self) -> dict[str, Obj]:
        return {o.id: o for o in self.objects}

    def object_by_id(self, obj_id: str) -> Obj:
        try:
            return self._by_id[obj_id]
        except KeyError:
            raise GridWalkError("unknown-object-id", f"no object {obj_id!r} in world") from None

    def has_object(self, obj_id: str) -> bool:
        return obj_id in self._by_id

    def in_bounds(self, p: Position) -> bool:
        return p.row < self.d and p.col < self.d


def new_world(d: int, agent: Agent) -> GridWorld:
    """Create an empty world. d must be at least 2."""
    if d < 2:
        raise GridWalkError("dimension-too-small", f"grid dimension {d} is below the minimum of 2")
    if agent.position.row >= d or agent.position.col >= d:
        raise GridWalkError(
            "agent-out-of-bounds",
            f"agent at ({agent.position.row}, {agent.position.col}) "
            f"is outside the {d}x{d} grid",
        )
    return GridWorld(d=d, objects=(), agent=agent)


def _span(obj: Obj) -> int:
    # only boxes occupy more than their anchor cell
    return obj.size if obj.shape == "box" else 1


def _blocks_overlap(a: Obj, b: Obj) -> bool:
    return (
        a.position.row < b.position.row + _span(b)
        and b.position.row < a.position.row + _span(a)
        and a.position.col < b.position.col + _span(b)
        and b.position.col < a.position.col + _span(a)
    )


def place_object(world: GridWorld, obj: Obj) -> GridWorld:
    """Return a new world with ``obj`` added.

    Raises:
        GridWalkError: out-of-bounds if the object's footprint leaves the
            grid, duplicate-id if the id is taken, cell-occupied on a
            collision (non-box on the same cell as a non-box, or two boxes
            whose blocks overlap).
    """
    span = _span(obj)
    if obj.position.row + span > world.d or obj.position.col + span > world.d:
        raise GridWalkError(
            "out-of-bounds",
            f"{obj.id} at ({obj.position.row}, {obj.position.col}) with span {span} "
            f"does not fit a {world.d}x{world.d} grid",
        )
    if world.has_object(obj.id):
        raise GridWalkError("duplicate-id", f"object id {obj.id!r} already placed")
    for other in world.objects:
        both_plain = obj.shape != "box" and other.shape != "box"
        both_box = obj.shape == "box" and other.shape == "box"
        if both_plain and obj.position == other.position:
            raise GridWalkError(
                "cell-occupied",
                f"cell ({obj.position.row}, {obj.position.col}) already holds {other.id}",
            )
        if both_box and _blocks_overlap(obj, other):
            raise GridWalkError(
                "cell-occupied", f"box {obj.id} overlaps box {other.id}"
            )
    return GridWorld(d=world.d, objects=world.objects + (obj,), agent=world.agent)


def covers(box: Obj, p: Position) -> bool:
    """True iff ``p`` lies inside the block occupied by ``box``."""
    if box.shape != "box":
        raise GridWalkError("not-a-box", f"{box.id} is a {box.shape}, not a box")
    return (
        box.position.row <= p.row < box.position.row + box.size
        and box.position.col <= p.col < box.position.col + box.size
    )


def world_to_dict(world: GridWorld) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "d": world.d,
        "agent": {
            "row": world.agent.position.row,
            "col": world.agent.position.col,
            "orientation": world.agent.orientation,
        },
        "objects": [
            {
                "id": o.id,
                "shape": o.shape,
                "color": o.color,
                "size": o.size,
                "row": o.position.row,
                "col": o.position.col,
            }
            for o in world.objects
        ],
    }


def serialize_world(world: GridWorld) -> str:
    return json.dumps(world_to_dict(world), sort_keys=True, separators=(",", ":"))


def _field(doc: dict, key: str, kind: type, where: str) -> Any:
    if key not in doc:
        raise GridWalkError("malformed-document", f"{where} is missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise GridWalkError(
            "malformed-document", f"{where} field {key!r} must be {kind.__name__}"
        )
    return value


def world_from_dict(doc: Any) -> GridWorld:
    """Rebuild a world from its document form, enforcing every invariant.

    Structural problems (wrong types, missing keys, bad schema_version)
    raise malformed-document; value problems (size 5, overlapping boxes)
    raise invariant-violation.
    """
    if not isinstance(doc, dict):
        raise GridWalkError("malformed-document", "world document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise GridWalkError(
            "malformed-document",
            f"schema_version must be {SCHEMA_VERSION}, got {doc.get('schema_version')!r}",
        )
    d = _field(doc, "d", int, "world document")
    agent_doc = _field(doc, "agent", dict, "world document")
    objects_doc = _field(doc, "objects", list, "world document")
    row = _field(agent_doc, "row", int, "agent")
    col = _field(agent_doc, "col", int, "agent")
    orientation = _field(agent_doc, "orientation", str, "agent")
    entries = []
    for i, entry in enumerate(objects_doc):
        if not isinstance(entry, dict):
            raise GridWalkError("malformed-document", f"objects[{i}] must be an object")
        entries.append(
            (
                _field(entry, "id", str, f"objects[{i}]"),
                _field(entry, "shape", str, f"objects[{i}]"),
                _field(entry, "color", str, f"objects[{i}]"),
                _field(entry, "size", int, f"objects[{i}]"),
                _field(entry, "row", int, f"objects[{i}]"),
                _field(entry, "col", int, f"objects[{i}]"),
            )
        )
    try:
        world = new_world(d, Agent(Position(row, col), orientation))
        for oid, shape, color, size, orow, ocol in entries:
            world = place_object(world, Obj(oid, shape, color, size, Position(orow, ocol)))
    except GridWalkError as exc:
        raise GridWalkError(
            "invariant-violation", f"world document violates invariants: {exc.message}"
        ) from exc
    return world


def deserialize_world(text: str) -> GridWorld:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridWalkError("malformed-document", f"world document is not valid JSON: {exc}") from exc
    return world_from_dict(doc)
