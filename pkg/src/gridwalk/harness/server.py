"""Line-delimited JSON protocol for driving the engine from another process.

One request per line: {"id": ..., "method": ..., "params": {...}}. One
response per line: {"id": ..., "result": ...} on success, otherwise
{"id": ..., "error": {"code": ..., "message": ..., "data": {...}}}. A
malformed line gets an error response with id null; nothing crashes the
session. Served over stdio or TCP (one session per connection).
"""

from __future__ import annotations

import json
import socket
import socketserver
import subprocess
import sys
from dataclasses import dataclass
from typing import Any, Callable, IO

from ..benchgen import Episode
from ..errors import GridWalkError
from ..language import Lexicon, ast_to_dict, default_lexicon, parse_text
from ..resolver import execute, program_from_dict
from ..toolset import call_tool, describe_tools
from ..world import GridWorld, world_from_dict, world_to_dict

PROTOCOL_METHODS = (
    "session.load_world",
    "lang.parse",
    "tool.list",
    "tool.call",
    "resolve.submit",
    "resolve.batch",
    "episode.next",
)


@dataclass(frozen=True)
class ServeConfig:
    episodes: tuple[Episode, ...] = ()
    lexicon: Lexicon | None = None


class Session:
    """Per-connection protocol state: a world, a lexicon, an episode cursor."""

    def __init__(self, config: ServeConfig | None = None):
        self._config = config or ServeConfig()
        self._lexicon = self._config.lexicon or default_lexicon()
        self._world: GridWorld | None = None
        self._cursor = 0
        self._current: Episode | None = None
        self._methods: dict[str, Callable[[dict[str, Any]], Any]] = {
            "session.load_world": self._load_world,
            "lang.parse": self._parse,
            "tool.list": self._tool_list,
            "tool.call": self._tool_call,
            "resolve.submit": self._submit,
            "resolve.batch": self._batch,
            "episode.next": self._next_episode,
        }

    # -- method handlers --

    def _param(self, params: dict[str, Any], name: str) -> Any:
        if name not in params:
            raise GridWalkError("invalid-params", f"missing param {name!r}")
        return params[name]

    def _load_world(self, params: dict[str, Any]) -> Any:
        world = world_from_dict(self._param(params, "world"))
        self._world = world
        self._current = None
        return {"loaded": True, "objects": len(world.objects)}

    def _parse(self, params: dict[str, Any]) -> Any:
        text = self._param(params, "text")
        if not isinstance(text, str):
            raise GridWalkError("invalid-params", "text must be a string")
        return {"ast": ast_to_dict(parse_text(text, self._lexicon))}

    def _tool_list(self, params: dict[str, Any]) -> Any:
        return {"tools": [d.to_dict() for d in describe_tools()]}

    def _tool_call(self, params: dict[str, Any]) -> Any:
        name = self._param(params, "name")
        args = params.get("args", {})
        if not isinstance(args, dict):
            raise GridWalkError("invalid-params", "args must be an object")
        if not any(d.name == name for d in describe_tools()):
            raise GridWalkError("unknown-method", f"no tool named {name!r}")
        return {"value": call_tool(self._world, name, args)}

    def _submit(self, params: dict[str, Any]) -> Any:
        program = program_from_dict(self._param(params, "program"))
        if self._world is None:
            raise GridWalkError("no-world-loaded", "load a world or an episode first")
        target = execute(program, self._world)
        result: dict[str, Any] = {"target": target}
        if self._current is not None:
            result["correct"] = target == self._current.target_id
        return result

    def _batch(self, params: dict[str, Any]) -> Any:
        items = self._param(params, "items")
        if not isinstance(items, list):
            raise GridWalkError("invalid-params", "items must be a list")
        by_id = {e.episode_id: e for e in self._config.episodes}
        results: list[dict[str, Any]] = []
        n_match = 0
        for item in items:
            if not isinstance(item, dict) or "episode_id" not in item or "program" not in item:
                raise GridWalkError(
                    "invalid-params", "each item needs episode_id and program"
                )
            episode_id = item["episode_id"]
            episode = by_id.get(episode_id)
            if episode is None:
                results.append({"episode_id": episode_id, "error": "unknown-episode-id"})
                continue
            try:
                target = execute(program_from_dict(item["program"]), episode.world)
            except GridWalkError as exc:
                results.append({"episode_id": episode_id, "error": exc.code})
                continue
            correct = target == episode.target_id
            n_match += correct
            results.append(
                {"episode_id": episode_id, "target": target, "correct": correct}
            )
        return {"results": results, "n_total": len(items), "n_match": n_match}

    def _next_episode(self, params: dict[str, Any]) -> Any:
        if self._cursor >= len(self._config.episodes):
            self._current = None
            return {"done": True}
        episode = self._config.episodes[self._cursor]
        self._cursor += 1
        self._current = episode
        self._world = episode.world
        return {
            "done": False,
            "episode_id": episode.episode_id,
            "world": world_to_dict(episode.world),
            "question": episode.question,
        }

    # -- wire handling --

    def handle(self, request: Any) -> dict[str, Any]:
        rid = request.get("id") if isinstance(request, dict) else None
        if not isinstance(request, dict) or not isinstance(request.get("method"), str):
            return _error_response(
                rid, GridWalkError("malformed-request", "expected {id, method, params}")
            )
        params = request.get("params", {})
        if not isinstance(params, dict):
            return _error_response(
                rid, GridWalkError("invalid-params", "params must be an object")
            )
        method = self._methods.get(request["method"])
        if method is None:
            return _error_response(
                rid, GridWalkError("unknown-method", f"unknown method {request['method']!r}")
            )
        try:
            return {"id": rid, "result": method(params)}
        except GridWalkError as exc:
            return _error_response(rid, exc)
        except Exception as exc:  # noqa: BLE001 - the session must survive anything
            return _error_response(rid, GridWalkError("internal-error", repr(exc)))

    def handle_line(self, line: str) -> str | None:
        if not line.strip():
            return None
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            response = _error_response(
                None, GridWalkError("malformed-request", f"bad JSON: {exc.msg}")
            )
            return json.dumps(response)
        return json.dumps(self.handle(request))


def _error_response(rid: Any, exc: GridWalkError) -> dict[str, Any]:
    return {
        "id": rid,
        "error": {"code": exc.code, "message": exc.message, "data": exc.data},
    }


def serve_stdio(
    config: ServeConfig | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
) -> None:
    """Serve one session over stdin/stdout until EOF."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    session = Session(config)
    for line in stdin:
        response = session.handle_line(line)
        if response is not None:
            stdout.write(response + "\n")
            stdout.flush()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        session = Session(self.server.config)  # type: ignore[attr-defined]
        for raw in self.rfile:
            response = session.handle_line(raw.decode("utf-8", errors="replace"))
            if response is not None:
                self.wfile.write(response.encode("utf-8") + b"\n")
                self.wfile.flush()


class _TCPServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], config: ServeConfig):
        super().__init__(address, _Handler)
        self.config = config


def make_tcp_server(config: ServeConfig | None = None, host: str = "127.0.0.1", port: int = 0) -> _TCPServer:
    """Bind a threaded TCP server; each connection gets its own session."""
    return _TCPServer((host, port), config or ServeConfig())


def serve(
    config: ServeConfig | None = None,
    transport: str = "stdio",
    host: str = "127.0.0.1",
    port: int = 7455,
) -> None:
    """Run the protocol server until EOF (stdio) or interrupt (tcp)."""
    if transport == "stdio":
        serve_stdio(config)
    elif transport == "tcp":
        with make_tcp_server(config, host, port) as server:
            server.serve_forever()
    else:
        raise GridWalkError("invalid-params", f"unknown transport {transport!r}")


class LineClient:
    """Client half of the wire protocol over any line-oriented text pipe."""

    def __init__(self, reader: IO[str], writer: IO[str], closer: Callable[[], None] | None = None):
        self._reader = reader
        self._writer = writer
        self._closer = closer
        self._next_id = 1

    @classmethod
    def tcp(cls, host: str, port: int, timeout: float | None = 10.0) -> "LineClient":
        try:
            conn = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise GridWalkError(
                "endpoint-unreachable", f"cannot connect to {host}:{port}: {exc}"
            ) from exc
        reader = conn.makefile("r", encoding="utf-8")
        writer = conn.makefile("w", encoding="utf-8")
        return cls(reader, writer, closer=conn.close)

    @classmethod
    def spawn(cls, cmd: list[str]) -> "LineClient":
        try:
            proc = subprocess.Popen(
                cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise GridWalkError(
                "endpoint-unreachable", f"cannot start {cmd[0]!r}: {exc}"
            ) from exc
        assert proc.stdout is not None and proc.stdin is not None

        def close() -> None:
            proc.stdin.close()
            proc.wait(timeout=10)

        return cls(proc.stdout, proc.stdin, closer=close)

    def close(self) -> None:
        if self._closer is not None:
            self._closer()
            self._closer = None

    def __enter__(self) -> "LineClient":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()

    def request(self, method: str, params: dict[str, Any] | None = None) -> Any:
        """Send one request, wait for its response, return the result.

        Error responses become GridWalkErrors with the server's code. A dead
        pipe raises endpoint-unreachable; a reply that is not valid protocol
        raises protocol-violation.
        """
        rid = self._next_id
        self._next_id += 1
        line = json.dumps({"id": rid, "method": method, "params": params or {}})
        try:
            self._writer.write(line + "\n")
            self._writer.flush()
            raw = self._reader.readline()
        except (OSError, ValueError) as exc:
            raise GridWalkError("endpoint-unreachable", f"pipe failed: {exc}") from exc
        if not raw:
            raise GridWalkError("endpoint-unreachable", "endpoint closed the stream")
        try:
            response = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise GridWalkError(
                "protocol-violation", f"response is not JSON: {exc.msg}"
            ) from exc
        if not isinstance(response, dict) or response.get("id") != rid:
            raise GridWalkError(
                "protocol-violation", "response id does not match the request"
            )
        if "error" in response:
            error = response["error"]
            if not isinstance(error, dict) or "code" not in error:
                raise GridWalkError("protocol-violation", "malformed error payload")
            raise GridWalkError(
                str(error["code"]),
                str(error.get("message", "")),
                **(error.get("data") or {}),
            )
        if "result" not in response:
            raise GridWalkError("protocol-violation", "response has neither result nor error")
        return response["result"]


class WireCandidate:
    """Adapts a LineClient to the tool-candidate interface used by verify."""

    def __init__(self, client: LineClient):
        self._client = client

    def load_world(self, world: GridWorld) -> None:
        self._client.request("session.load_world", {"world": world_to_dict(world)})

    def call(self, name: str, args: dict[str, Any]) -> Any:
        result = self._client.request("tool.call", {"name": name, "args": args})
        if not isinstance(result, dict) or "value" not in result:
            raise GridWalkError("protocol-violation", "tool.call result missing value")
        return result["value"]
