import io
import json
import threading

import pytest
from hypothesis import given, strategies as st

import gridwalk as gw
from gridwalk import report
from gridwalk.benchgen import episode_from_record, episode_to_record
from gridwalk.errors import GridWalkError
from gridwalk.harness import (
    LineClient,
    LocalCandidate,
    ServeConfig,
    Session,
    WireCandidate,
    em_percent,
    emit_prompt_pack,
    evaluate_em,
    format_report,
    mutant_candidate,
    mutant_names,
    reference_candidate,
    split_prompt_pack,
    verification_examples,
    verify_tool,
)
from gridwalk.harness.server import make_tcp_server, serve_stdio
from gridwalk.world import world_from_dict


@pytest.fixture(scope="module")
def tiny_split():
    spec = gw.make_preset("A1", episodes_per_split=4, train_episodes=4)
    return gw.generate_split(spec)


# --- exact match -------------------------------------------------------------


def test_em_percent_frozen():
    assert em_percent(479, 500) == 95.8
    assert em_percent(490, 500) == 98.0
    assert em_percent(500, 500) == 100.0
    assert em_percent(0, 500) == 0.0
    # rounds half up, not banker's
    assert em_percent(1, 16) == 6.3
    assert em_percent(1, 3) == 33.3
    assert em_percent(2, 3) == 66.7
    with pytest.raises(GridWalkError) as e:
        em_percent(0, 0)
    assert e.value.code == "invalid-params"


@given(st.integers(0, 10_000))
def test_em_percent_bounds(n):
    value = em_percent(n, 10_000)
    assert 0.0 <= value <= 100.0
    assert value == round(value, 1)


def test_evaluate_em(tiny_split):
    _, test = tiny_split
    perfect = {ep.episode_id: ep.target_id for ep in test}
    report = evaluate_em(perfect, test)
    assert report.em_percent == 100.0
    assert report.n_match == report.n_total == 4
    assert report.split == "A1"
    assert report.mismatches == ()

    wrong = dict(perfect)
    wrong[test[0].episode_id] = "nope"
    report = evaluate_em(wrong, test)
    assert report.n_match == 3
    assert report.mismatches[0].episode_id == test[0].episode_id
    assert report.mismatches[0].predicted == "nope"
    assert report.mismatches[0].gold == test[0].target_id

    # a missing prediction is a mismatch with predicted None
    partial = dict(perfect)
    del partial[test[1].episode_id]
    report = evaluate_em(partial, test)
    assert report.n_match == 3
    assert any(m.predicted is None for m in report.mismatches)


def test_evaluate_em_actions_field(tiny_split):
    _, test = tiny_split
    predictions = {ep.episode_id: " ".join(ep.gold_actions) for ep in test}
    report = evaluate_em(predictions, test, field="actions")
    assert report.em_percent == 100.0
    assert report.field == "actions"


def test_evaluate_em_errors(tiny_split):
    _, test = tiny_split
    with pytest.raises(GridWalkError) as e:
        evaluate_em({"ghost": "x"}, test)
    assert e.value.code == "unknown-episode-id"
    assert e.value.data["episode_ids"] == ["ghost"]
    with pytest.raises(GridWalkError) as e:
        evaluate_em({}, [])
    assert e.value.code == "invalid-params"
    with pytest.raises(GridWalkError) as e:
        evaluate_em({}, test, field="reward")
    assert e.value.code == "invalid-params"


def test_format_report(tiny_split):
    _, test = tiny_split
    report = evaluate_em({ep.episode_id: "x" for ep in test}, test)
    text = format_report(report)
    assert "A1" in text and "0.0" in text
    assert text.count("mismatch") >= 1


# --- tool verification --------------------------------------------------------


def test_verification_example_counts():
    for tool in ("filter_by_attribute", "filter_relationship", "filter_size", "unique_target"):
        build, validation = verification_examples(tool)
        assert len(build) == 3
        assert len(validation) == 5
    with pytest.raises(GridWalkError) as e:
        verification_examples("nope")
    assert e.value.code == "unknown-tool"


def test_reference_passes_all_tools():
    for tool in ("filter_by_attribute", "filter_relationship", "filter_size", "unique_target"):
        report = verify_tool(reference_candidate(), tool)
        assert report.passed
        assert report.build_passed == 3
        assert report.validation_passed == 5
        assert report.first_divergence is None


def test_every_mutant_is_caught():
    assert len(mutant_names()) == 6
    for name in mutant_names():
        tool, candidate = mutant_candidate(name)
        report = verify_tool(candidate, tool)
        assert not report.passed, name
        div = report.first_divergence
        assert div is not None
        assert div.phase in ("build", "validation")
        assert div.expected != div.actual
        # the divergence record carries everything needed to reproduce it
        world = world_from_dict(div.world)
        assert world.objects
        assert isinstance(div.args, dict)
        doc = report.to_dict()
        assert doc["passed"] is False
        assert doc["first_divergence"]["phase"] == div.phase
    with pytest.raises(GridWalkError) as e:
        mutant_candidate("nope")
    assert e.value.code == "unknown-tool"


def test_verification_stops_at_first_divergence():
    tool, candidate = mutant_candidate("no-self-exclusion")
    report = verify_tool(candidate, tool)
    # this mutant survives the build phase and dies on the first validation
    # example (a head offered as its own witness)
    assert report.build_passed == 3
    assert report.validation_passed == 0
    assert report.first_divergence.phase == "validation"
    assert report.first_divergence.index == 0


def test_error_outcomes_compare_by_code():
    # an unknown attribute value is the expected outcome, so a candidate
    # raising the same code agrees with the reference
    report = verify_tool(reference_candidate(), "filter_by_attribute")
    assert report.passed


def test_wire_failures_propagate_with_phase():
    def broken(world, **args):
        raise GridWalkError("endpoint-unreachable", "candidate fell over")

    candidate = LocalCandidate({"filter_size": broken})
    with pytest.raises(GridWalkError) as e:
        verify_tool(candidate, "filter_size")
    assert e.value.code == "endpoint-unreachable"
    assert e.value.data["phase"] == "build"
    assert e.value.data["index"] == 0


# --- prompt packs -------------------------------------------------------------


def test_prompt_pack_round_trip(tiny_split):
    train, test = tiny_split
    pack = emit_prompt_pack(train, test[0], k=3)
    parts = split_prompt_pack(pack)
    assert len(parts["demonstrations"]) == 3
    assert "filter_relationship(head_objects, condition, tail_objects)" in parts["tools"]
    assert "unique_target" in parts["instruction"]
    assert parts["test"].splitlines()[1] == f"question: {test[0].question}"
    for demo, episode in zip(parts["demonstrations"], train):
        assert f"answer: {episode.target_id}" in demo
        assert f"question: {episode.question}" in demo


def test_prompt_pack_is_deterministic(tiny_split):
    train, test = tiny_split
    assert emit_prompt_pack(train, test[1], k=2) == emit_prompt_pack(train, test[1], k=2)


def test_prompt_pack_errors(tiny_split):
    train, test = tiny_split
    with pytest.raises(GridWalkError) as e:
        emit_prompt_pack(train, test[0], k=0)
    assert e.value.code == "invalid-params"
    with pytest.raises(GridWalkError) as e:
        emit_prompt_pack(train[:1], test[0], k=3)
    assert e.value.code == "invalid-params"
    without_ast = episode_from_record(episode_to_record(train[0]), parse_questions=False)
    with pytest.raises(GridWalkError) as e:
        emit_prompt_pack([without_ast] * 3, test[0], k=3)
    assert e.value.code == "invalid-params"


def test_split_prompt_pack_rejects_malformed(tiny_split):
    train, test = tiny_split
    pack = emit_prompt_pack(train, test[0], k=2)
    for broken in (
        "prefix junk\n" + pack,
        pack.replace("=== task instruction ===", "=== vibes ==="),
        pack.replace("=== demonstration 2 ===", "=== demonstration 9 ==="),
        pack.replace("=== test question ===\n", ""),
    ):
        with pytest.raises(GridWalkError) as e:
            split_prompt_pack(broken)
        assert e.value.code == "malformed-document"


# --- wire protocol ------------------------------------------------------------


def rpc(session, method, params=None, rid=1):
    line = json.dumps({"id": rid, "method": method, "params": params or {}})
    return json.loads(session.handle_line(line))


def test_session_world_and_tools(six_object_world):
    session = Session()
    doc = gw.world_to_dict(six_object_world)
    response = rpc(session, "session.load_world", {"world": doc})
    assert response["result"] == {"loaded": True, "objects": 6}
    response = rpc(
        session,
        "tool.call",
        {"name": "filter_by_attribute", "args": {"objects": ["t1", "t2"], "kind": "color", "value": "red"}},
    )
    assert response["result"]["value"] == ["t1"]
    # tool errors surface as protocol errors with the tool's code
    response = rpc(
        session,
        "tool.call",
        {"name": "filter_size", "args": {"objects": ["t1"], "size_word": "huge"}},
    )
    assert response["error"]["code"] == "unknown-attribute-value"
    # before any world is loaded, world-dependent tools refuse
    fresh = Session()
    response = rpc(
        fresh,
        "tool.call",
        {"name": "filter_size", "args": {"objects": [], "size_word": "small"}},
    )
    assert response["error"]["code"] == "no-world-loaded"


def test_session_parse_and_errors():
    session = Session()
    response = rpc(session, "lang.parse", {"text": "walk to the red circle"})
    assert response["result"]["ast"]["target"]["color"] == "red"
    response = rpc(session, "lang.parse", {"text": "walk to the blob"})
    assert response["error"]["code"] == "unknown-token"
    assert response["error"]["data"]["position"] == 12
    response = rpc(session, "lang.parse", {})
    assert response["error"]["code"] == "invalid-params"
    response = rpc(session, "lang.parse", {"text": 5})
    assert response["error"]["code"] == "invalid-params"


def test_session_wire_hygiene():
    session = Session()
    # unknown wire method, and unknown tool name at the wire layer
    assert rpc(session, "zap.zap")["error"]["code"] == "unknown-method"
    assert (
        rpc(session, "tool.call", {"name": "nope", "args": {}})["error"]["code"]
        == "unknown-method"
    )
    # malformed JSON answers with id null instead of crashing
    response = json.loads(session.handle_line("{broken"))
    assert response["id"] is None
    assert response["error"]["code"] == "malformed-request"
    # structurally bad requests
    response = json.loads(session.handle_line(json.dumps({"id": 4, "params": {}})))
    assert response["error"]["code"] == "malformed-request"
    assert response["id"] == 4
    response = json.loads(session.handle_line(json.dumps([1, 2])))
    assert response["error"]["code"] == "malformed-request"
    response = rpc(session, "tool.list", None)
    assert len(response["result"]["tools"]) == 4
    bad_params = json.dumps({"id": 5, "method": "tool.list", "params": [1]})
    assert json.loads(session.handle_line(bad_params))["error"]["code"] == "invalid-params"
    # blank lines are ignored
    assert session.handle_line("  \n") is None
    # request ids echo back verbatim
    assert rpc(session, "tool.list", rid="abc")["id"] == "abc"


def test_session_survives_internal_errors():
    session = Session()
    session._methods["boom.boom"] = lambda params: 1 / 0
    response = rpc(session, "boom.boom")
    assert response["error"]["code"] == "internal-error"
    assert rpc(session, "tool.list")["result"]["tools"]


def test_episode_flow(tiny_split):
    _, test = tiny_split
    session = Session(ServeConfig(episodes=tuple(test[:2])))
    first = rpc(session, "episode.next")["result"]
    assert first["done"] is False
    assert first["episode_id"] == test[0].episode_id
    assert first["question"] == test[0].question
    # the episode's world is bound for subsequent tool calls
    program = gw.compile_command(test[0].ast)
    result = rpc(session, "resolve.submit", {"program": gw.program_to_dict(program)})["result"]
    assert result == {"target": test[0].target_id, "correct": True}
    rpc(session, "episode.next")
    done = rpc(session, "episode.next")["result"]
    assert done == {"done": True}
    # submitting with no episode and no world refuses
    fresh = Session()
    response = rpc(fresh, "resolve.submit", {"program": gw.program_to_dict(program)})
    assert response["error"]["code"] == "no-world-loaded"


def test_resolve_batch(tiny_split):
    _, test = tiny_split
    session = Session(ServeConfig(episodes=tuple(test)))
    items = [
        {"episode_id": ep.episode_id, "program": gw.program_to_dict(gw.compile_command(ep.ast))}
        for ep in test
    ]
    items.append({"episode_id": "ghost", "program": items[0]["program"]})
    result = rpc(session, "resolve.batch", {"items": items})["result"]
    assert result["n_total"] == 5
    assert result["n_match"] == 4
    assert result["results"][-1] == {"episode_id": "ghost", "error": "unknown-episode-id"}
    assert all(r["correct"] for r in result["results"][:-1])
    # item errors are contained, request errors are not
    response = rpc(session, "resolve.batch", {"items": "x"})
    assert response["error"]["code"] == "invalid-params"
    response = rpc(session, "resolve.batch", {"items": [{"episode_id": "e"}]})
    assert response["error"]["code"] == "invalid-params"


def test_serve_stdio(tiny_split):
    _, test = tiny_split
    requests = [
        json.dumps({"id": 1, "method": "episode.next", "params": {}}),
        "",
        json.dumps({"id": 2, "method": "tool.list", "params": {}}),
        "{garbage",
    ]
    stdout = io.StringIO()
    serve_stdio(ServeConfig(episodes=tuple(test)), io.StringIO("\n".join(requests) + "\n"), stdout)
    lines = [json.loads(line) for line in stdout.getvalue().splitlines()]
    assert len(lines) == 3  # the blank line produces nothing
    assert lines[0]["id"] == 1 and lines[0]["result"]["done"] is False
    assert lines[1]["id"] == 2
    assert lines[2]["id"] is None and lines[2]["error"]["code"] == "malformed-request"


def test_tcp_round_trip(six_object_world):
    server = make_tcp_server(ServeConfig())
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        host, port = server.server_address[:2]
        with LineClient.tcp(host, port) as client:
            candidate = WireCandidate(client)
            candidate.load_world(six_object_world)
            value = candidate.call(
                "filter_by_attribute", {"objects": ["t1", "t3"], "kind": "color", "value": "red"}
            )
            assert value == ["t1", "t3"]
            report = verify_tool(candidate, "filter_relationship")
            assert report.passed
            with pytest.raises(GridWalkError) as e:
                client.request("lang.parse", {"text": "walk to the blob"})
            assert e.value.code == "unknown-token"
            assert e.value.data["position"] == 12
    finally:
        server.shutdown()
        server.server_close()


def test_line_client_failure_modes():
    # server closes the stream: endpoint-unreachable
    client = LineClient(io.StringIO(""), io.StringIO())
    with pytest.raises(GridWalkError) as e:
        client.request("tool.list")
    assert e.value.code == "endpoint-unreachable"
    # non-JSON reply: protocol-violation
    client = LineClient(io.StringIO("pardon?\n"), io.StringIO())
    with pytest.raises(GridWalkError) as e:
        client.request("tool.list")
    assert e.value.code == "protocol-violation"
    # mismatched response id: protocol-violation
    client = LineClient(io.StringIO('{"id": 99, "result": {}}\n'), io.StringIO())
    with pytest.raises(GridWalkError) as e:
        client.request("tool.list")
    assert e.value.code == "protocol-violation"
    # a result-free, error-free reply: protocol-violation
    client = LineClient(io.StringIO('{"id": 1}\n'), io.StringIO())
    with pytest.raises(GridWalkError) as e:
        client.request("tool.list")
    assert e.value.code == "protocol-violation"
    with pytest.raises(GridWalkError) as e:
        LineClient.tcp("127.0.0.1", 1, timeout=0.2)
    assert e.value.code == "endpoint-unreachable"


def test_unreachable_candidate_aborts_verification():
    client = LineClient(io.StringIO(""), io.StringIO())
    with pytest.raises(GridWalkError) as e:
        verify_tool(WireCandidate(client), "filter_size")
    assert e.value.code == "endpoint-unreachable"
    assert e.value.data["phase"] == "build"


# --- report figures -----------------------------------------------------------


def test_figures_render_to_files(tmp_path, tiny_split):
    train, test = tiny_split
    eval_report = evaluate_em({ep.episode_id: ep.target_id for ep in test}, test)
    out = report.render_eval_figure(eval_report, tmp_path / "eval.png")
    assert out.stat().st_size > 0
    spec = gw.make_preset("A1", episodes_per_split=4, train_episodes=4)
    audit = gw.holdout_check(train, test, spec)
    out = report.render_holdout_figure(audit, tmp_path / "audit.png")
    assert out.stat().st_size > 0
