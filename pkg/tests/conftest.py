import pytest

from gridwalk.world import Agent, Obj, Position, new_world, place_object

# populated by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def build_world(d, agent_row, agent_col, orientation, objects):
    """objects: iterable of (id, shape, color, size, row, col)."""
    world = new_world(d, Agent(Position(agent_row, agent_col), orientation))
    for oid, shape, color, size, row, col in objects:
        world = place_object(world, Obj(oid, shape, color, size, Position(row, col)))
    return world


@pytest.fixture
def six_object_world():
    # t4 is a 2x2 box covering rows 3-4, cols 3-4; t5 sits inside it
    return build_world(
        6,
        0,
        0,
        "north",
        [
            ("t1", "circle", "red", 1, 0, 0),
            ("t2", "circle", "blue", 2, 0, 3),
            ("t3", "square", "red", 3, 2, 0),
            ("t4", "box", "yellow", 2, 3, 3),
            ("t5", "cylinder", "green", 2, 3, 4),
            ("t6", "cylinder", "red", 4, 5, 0),
        ],
    )
