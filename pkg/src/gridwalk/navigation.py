"""Action planning and simulation on the grid.

Actions are turn_left, turn_right, walk. Walking moves one cell in the
facing direction: north is row-1, south row+1, east col+1, west col-1.
Objects never block movement; only the grid edge does.
"""

from __future__ import annotations

from .errors import GridWalkError
from .world import Agent, GridWorld, Position

ACTIONS = ("turn_left", "turn_right", "walk")

_RING = ("north", "east", "south", "west")  # clockwise; turn_right steps +1
_DELTAS = {"north": (-1, 0), "east": (0, 1), "south": (1, 0), "west": (0, -1)}


def turn(orientation: str, action: str) -> str:
    idx = _RING.index(orientation)
    if action == "turn_right":
        return _RING[(idx + 1) % 4]
    if action == "turn_left":
        return _RING[(idx - 1) % 4]
    raise GridWalkError("unknown-action", f"{action!r} is not a turn")


def simulate(world: GridWorld, actions: list[str]) -> Agent:
    """Fold actions over the world's agent; error on leaving the grid.

    The walked-off-grid error reports the index of the offending action.
    """
    row, col = world.agent.position.row, world.agent.position.col
    orientation = world.agent.orientation
    for i, action in enumerate(actions):
        if action in ("turn_left", "turn_right"):
            orientation = turn(orientation, action)
        elif action == "walk":
            dr, dc = _DELTAS[orientation]
            row, col = row + dr, col + dc
            if not (0 <= row < world.d and 0 <= col < world.d):
                raise GridWalkError(
                    "walked-off-grid",
                    f"action {i} walks off the grid to ({row}, {col})",
                    index=i,
                )
        else:
            raise GridWalkError("unknown-action", f"unknown action {action!r}", index=i)
    return Agent(Position(row, col), orientation)


def _rotation(src: str, dst: str) -> list[str]:
    # minimal turn sequence; a half turn goes through turn_right
    diff = (_RING.index(dst) - _RING.index(src)) % 4
    return {0: [], 1: ["turn_right"], 2: ["turn_right", "turn_right"], 3: ["turn_left"]}[diff]


def plan_actions(world: GridWorld, target_id: str) -> list[str]:
    """Shortest action sequence ending on the target object's anchor cell.

    Cost counts every action. Among equally short plans the canonical one
    covers the row distance before the column distance and prefers
    turn_right when a half turn is needed.
    """
    try:
        target = world.object_by_id(target_id)
    except GridWalkError as exc:
        raise GridWalkError("unknown-target", f"cannot plan to {target_id!r}: {exc.message}") from exc
    dr = target.position.row - world.agent.position.row
    dc = target.position.col - world.agent.position.col
    if dr == 0 and dc == 0:
        return []
    orientation = world.agent.orientation
    row_dir = "south" if dr > 0 else "north"
    col_dir = "east" if dc > 0 else "west"
    if dc == 0:
        return _rotation(orientation, row_dir) + ["walk"] * abs(dr)
    if dr == 0:
        return _rotation(orientation, col_dir) + ["walk"] * abs(dc)
    row_first = (
        _rotation(orientation, row_dir)
        + ["walk"] * abs(dr)
        + _rotation(row_dir, col_dir)
        + ["walk"] * abs(dc)
    )
    col_first = (
        _rotation(orientation, col_dir)
        + ["walk"] * abs(dc)
        + _rotation(col_dir, row_dir)
        + ["walk"] * abs(dr)
    )
    return row_first if len(row_first) <= len(col_first) else col_first
