import pytest
from hypothesis import given, strategies as st

from gridwalk.benchgen import sample_world
from gridwalk.errors import GridWalkError, ResolutionError
from gridwalk.toolset import (
    all_objects,
    call_tool,
    describe_tools,
    descriptor,
    filter_by_attribute,
    filter_relationship,
    filter_size,
    unique_target,
)

ALL = ["t1", "t2", "t3", "t4", "t5", "t6"]


def test_all_objects(six_object_world):
    assert all_objects(six_object_world) == ALL


def test_filter_by_attribute(six_object_world):
    w = six_object_world
    assert filter_by_attribute(w, ALL, "color", "red") == ["t1", "t3", "t6"]
    assert filter_by_attribute(w, ALL, "shape", "circle") == ["t1", "t2"]
    assert filter_by_attribute(w, ["t2", "t3"], "color", "red") == ["t3"]
    assert filter_by_attribute(w, [], "color", "red") == []
    # the wildcard noun matches every shape
    assert filter_by_attribute(w, ALL, "shape", "object") == ALL
    # inputs come back sorted by id regardless of request order
    assert filter_by_attribute(w, ["t6", "t1", "t3"], "color", "red") == ["t1", "t3", "t6"]


def test_filter_by_attribute_errors(six_object_world):
    w = six_object_world
    for kind, value in (("material", "red"), ("color", "purple"), ("shape", "blob")):
        with pytest.raises(GridWalkError) as e:
            filter_by_attribute(w, ALL, kind, value)
        assert e.value.code == "unknown-attribute-value"
    with pytest.raises(GridWalkError) as e:
        filter_by_attribute(w, ["zz"], "color", "red")
    assert e.value.code == "unknown-object-id"
    with pytest.raises(GridWalkError) as e:
        filter_by_attribute(w, ["t1", "t1"], "color", "red")
    assert e.value.code == "invalid-object-set"


def test_filter_relationship_geometry(six_object_world):
    w = six_object_world
    # rows: t1,t2 share row 0; t4,t5 share row 3
    assert filter_relationship(w, ALL, "same_row", ALL) == ["t1", "t2", "t4", "t5"]
    # columns: t1,t3,t6 share col 0; t2,t4 share col 3
    assert filter_relationship(w, ALL, "same_column", ALL) == ["t1", "t2", "t3", "t4", "t6"]
    assert filter_relationship(w, ["t1"], "same_color", ["t2"]) == []
    assert filter_relationship(w, ["t1"], "same_color", ["t3", "t6"]) == ["t1"]
    assert filter_relationship(w, ALL, "same_shape", ["t1"]) == ["t2"]
    assert filter_relationship(w, ["t2", "t3"], "same_size", ["t4", "t5"]) == ["t2"]


def test_filter_relationship_inside_of(six_object_world):
    w = six_object_world
    # t5 sits inside box t4; the box is not inside itself
    assert filter_relationship(w, ALL, "inside_of", ["t4"]) == ["t5"]
    # a non-box tail contains nothing
    assert filter_relationship(w, ["t5"], "inside_of", ["t1"]) == []


def test_filter_relationship_self_exclusion(six_object_world):
    w = six_object_world
    assert filter_relationship(w, ["t1"], "same_row", ["t1"]) == []
    assert filter_relationship(w, ["t1"], "same_shape", ["t1"]) == []


def test_filter_relationship_errors(six_object_world):
    with pytest.raises(GridWalkError) as e:
        filter_relationship(six_object_world, ["t1"], "touching", ["t2"])
    assert e.value.code == "unknown-relation"


def test_filter_size(six_object_world):
    w = six_object_world
    assert filter_size(w, ["t1", "t2", "t3"], "small") == ["t1"]
    assert filter_size(w, ["t1", "t2", "t3"], "big") == ["t3"]
    # ties keep every extreme object
    assert filter_size(w, ["t2", "t5"], "small") == ["t2", "t5"]
    assert filter_size(w, ["t2", "t5"], "big") == ["t2", "t5"]
    assert filter_size(w, [], "small") == []
    assert filter_size(w, [], "big") == []
    with pytest.raises(GridWalkError) as e:
        filter_size(w, ["t1"], "huge")
    assert e.value.code == "unknown-attribute-value"


def test_unique_target(six_object_world):
    w = six_object_world
    assert unique_target(["t3"]) == "t3"
    with pytest.raises(ResolutionError) as e:
        unique_target([])
    assert e.value.code == "no-target"
    with pytest.raises(ResolutionError) as e:
        unique_target(["t1", "t2"])
    assert e.value.code == "ambiguous-target"
    assert e.value.data["candidates"] == ["t1", "t2"]


def test_descriptors():
    tools = describe_tools()
    assert [t.name for t in tools] == [
        "filter_by_attribute",
        "filter_relationship",
        "filter_size",
        "unique_target",
    ]
    rel = descriptor("filter_relationship")
    assert [a.name for a in rel.args] == ["head_objects", "condition", "tail_objects"]
    assert rel.signature() == "filter_relationship(head_objects, condition, tail_objects) -> object-ids"
    doc = rel.to_dict()
    assert doc["name"] == "filter_relationship"
    assert len(doc["args"]) == 3
    with pytest.raises(GridWalkError) as e:
        descriptor("nope")
    assert e.value.code == "unknown-tool"


def test_call_tool(six_object_world):
    w = six_object_world
    value = call_tool(w, "filter_by_attribute", {"objects": ALL, "kind": "color", "value": "red"})
    assert value == ["t1", "t3", "t6"]
    assert call_tool(None, "unique_target", {"objects": ["t1"]}) == "t1"
    with pytest.raises(GridWalkError) as e:
        call_tool(w, "nope", {})
    assert e.value.code == "unknown-tool"
    for bad_args in (
        {"objects": ALL, "kind": "color"},  # missing
        {"objects": ALL, "kind": "color", "value": "red", "x": 1},  # extra
        {"object": ALL, "kind": "color", "value": "red"},  # misnamed
    ):
        with pytest.raises(GridWalkError) as e:
            call_tool(w, "filter_by_attribute", bad_args)
        assert e.value.code == "invalid-params"
    with pytest.raises(GridWalkError) as e:
        call_tool(None, "filter_by_attribute", {"objects": [], "kind": "color", "value": "red"})
    assert e.value.code == "no-world-loaded"


@given(st.integers(0, 10**9), st.sampled_from(["red", "blue", "green", "yellow"]))
def test_attribute_filter_properties(seed, color):
    world = sample_world(6, 8, seed)
    ids = all_objects(world)
    out = filter_by_attribute(world, ids, "color", color)
    assert set(out) <= set(ids)
    assert out == sorted(out)
    # idempotent and consistent with the world's own attributes
    assert filter_by_attribute(world, out, "color", color) == out
    assert all(world.object_by_id(i).color == color for i in out)
    rest = [i for i in ids if i not in out]
    assert all(world.object_by_id(i).color != color for i in rest)


@given(
    st.integers(0, 10**9),
    st.sampled_from(["same_row", "same_column", "same_color", "same_shape", "same_size", "inside_of"]),
)
def test_relationship_filter_properties(seed, relation):
    world = sample_world(6, 8, seed)
    ids = all_objects(world)
    out = filter_relationship(world, ids, relation, ids)
    assert set(out) <= set(ids)
    assert out == sorted(out)
    # shrinking the tail set can only shrink the result
    smaller = filter_relationship(world, ids, relation, ids[: len(ids) // 2])
    assert set(smaller) <= set(out)


@given(st.integers(0, 10**9))
def test_size_filter_properties(seed):
    world = sample_world(6, 8, seed)
    ids = all_objects(world)
    small = filter_size(world, ids, "small")
    big = filter_size(world, ids, "big")
    assert small and big
    sizes = [world.object_by_id(i).size for i in ids]
    assert all(world.object_by_id(i).size == min(sizes) for i in small)
    assert all(world.object_by_id(i).size == max(sizes) for i in big)
