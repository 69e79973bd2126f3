"""Command line entry point.

Every subcommand that emits a JSON report also drops a PNG figure next to
it unless told not to. Exit codes: 0 success, 1 engine error or failed
check, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import shlex
import sys
from pathlib import Path

from .benchgen import (
    PRESET_NAMES,
    SplitSpec,
    generate_split,
    holdout_check,
    lexicon_fingerprint,
    make_preset,
    read_episodes,
    write_split,
)
from .errors import GridWalkError
from .harness.evaluate import evaluate_em, format_report
from .harness.promptpack import emit_prompt_pack
from .harness.server import LineClient, ServeConfig, WireCandidate, make_tcp_server, serve
from .harness.verify import mutant_candidate, mutant_names, reference_candidate, verify_tool
from .language import Lexicon, default_lexicon, remap_lexicon
from .navigation import plan_actions
from .report import default_figure_path, render_eval_figure, render_holdout_figure
from .resolver import compile_command, execute
from .toolset import describe_tools


def _load_lexicon(path: str | None) -> Lexicon | None:
    if path is None:
        return None
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GridWalkError("invalid-lexicon", f"cannot read lexicon {path}: {exc}") from exc
    return Lexicon.from_dict(doc)


def _specs_from_arg(args: argparse.Namespace) -> list[SplitSpec]:
    raw = args.spec
    overrides = {}
    if args.episodes is not None:
        overrides["episodes_per_split"] = args.episodes
    if args.train_episodes is not None:
        overrides["train_episodes"] = args.train_episodes
    if args.seed is not None:
        overrides["seed"] = args.seed
    if raw.endswith(".json") or "/" in raw:
        spec = SplitSpec.from_dict(json.loads(Path(raw).read_text(encoding="utf-8")))
        return [dataclasses.replace(spec, **overrides) if overrides else spec]
    names = list(PRESET_NAMES) if raw == "all" else raw.split(",")
    specs = []
    for name in names:
        spec = make_preset(
            name.strip(),
            episodes_per_split=args.episodes if args.episodes is not None else 500,
            train_episodes=args.train_episodes,
            seed=args.seed,
        )
        specs.append(spec)
    return specs


def _cmd_generate(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon(args.lexicon)
    for spec in _specs_from_arg(args):
        train, test = generate_split(spec, lexicon)
        out_dir = Path(args.out) / spec.name
        write_split(train, test, spec, out_dir, lexicon)
        print(f"{spec.name}: {len(train)} train + {len(test)} test episodes -> {out_dir}")
    return 0


def _cmd_resolve(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon(args.lexicon)
    episodes = read_episodes(args.dataset, lexicon)
    lines = []
    n_ok = 0
    for episode in episodes:
        record: dict = {"episode_id": episode.episode_id}
        try:
            target = execute(compile_command(episode.ast), episode.world)
            record["target"] = target
            record["actions"] = " ".join(plan_actions(episode.world, target))
            n_ok += 1
        except GridWalkError as exc:
            record["error"] = exc.code
        lines.append(json.dumps(record, sort_keys=True, separators=(",", ":")))
    Path(args.out).write_text("\n".join(lines) + "\n" if lines else "", encoding="utf-8")
    print(f"resolved {n_ok}/{len(episodes)} episodes -> {args.out}")
    return 0


def _read_predictions(path: str, field: str) -> dict[str, str]:
    predictions: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GridWalkError("malformed-document", f"cannot read {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GridWalkError(
                "malformed-document", f"{path} line {line_no}: invalid JSON: {exc}"
            ) from exc
        if not isinstance(record, dict) or "episode_id" not in record:
            raise GridWalkError(
                "malformed-document", f"{path} line {line_no}: needs an episode_id"
            )
        if field in record:
            predictions[record["episode_id"]] = record[field]
    return predictions


def _cmd_evaluate(args: argparse.Namespace) -> int:
    gold = read_episodes(args.dataset, parse_questions=False)
    predictions = _read_predictions(args.predictions, args.field)
    report = evaluate_em(predictions, gold, field=args.field)
    print(format_report(report))
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        print(f"report -> {out}")
        if not args.no_figure:
            figure = render_eval_figure(report, default_figure_path(out))
            print(f"figure -> {figure}")
    return 0


def _cmd_holdout_check(args: argparse.Namespace) -> int:
    split_dir = Path(args.dir)
    manifest_path = split_dir / "manifest.json"
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GridWalkError(
            "malformed-document", f"cannot read {manifest_path}: {exc}"
        ) from exc
    if not isinstance(manifest, dict) or "spec" not in manifest:
        raise GridWalkError("malformed-document", f"{manifest_path} has no spec")
    spec = SplitSpec.from_dict(manifest["spec"])
    lexicon = _load_lexicon(args.lexicon)
    train = read_episodes(split_dir / "train.jsonl", lexicon)
    test = read_episodes(split_dir / "test.jsonl", lexicon)
    report = holdout_check(train, test, spec, lexicon)
    status = "clean" if not report.violations else f"{len(report.violations)} violation(s)"
    print(f"{report.split}: {status}, {report.n_train} train / {report.n_test} test")
    for label, count in report.coverage.items():
        print(f"  {label}: {count}")
    for violation in report.violations[:10]:
        print(f"  VIOLATION {violation.kind} {violation.episode_id} ({violation.pattern})")
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        print(f"report -> {out}")
        if not args.no_figure:
            figure = render_holdout_figure(report, default_figure_path(out))
            print(f"figure -> {figure}")
    return 1 if report.violations else 0


def _cmd_prompt_pack(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon(args.lexicon)
    train = read_episodes(args.train, lexicon)
    test = read_episodes(args.test, lexicon)
    if not 0 <= args.index < len(test):
        raise GridWalkError(
            "invalid-params", f"index {args.index} out of range for {len(test)} test episodes"
        )
    pack = emit_prompt_pack(train, test[args.index], lexicon, k=args.k)
    if args.out:
        Path(args.out).write_text(pack, encoding="utf-8")
        print(f"prompt pack -> {args.out}")
    else:
        sys.stdout.write(pack)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon(args.lexicon)
    episodes = tuple(read_episodes(args.dataset, lexicon)) if args.dataset else ()
    config = ServeConfig(episodes=episodes, lexicon=lexicon)
    if args.transport == "stdio":
        serve(config, "stdio")
        return 0
    with make_tcp_server(config, args.host, args.port) as server:
        host, port = server.server_address[:2]
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0


def _cmd_verify_tool(args: argparse.Namespace) -> int:
    if args.list_mutants:
        for name in mutant_names():
            print(name)
        return 0
    client: LineClient | None = None
    forced_tool: str | None = None
    if args.mutant:
        forced_tool, candidate = mutant_candidate(args.mutant)
        if args.tool and args.tool != forced_tool:
            raise GridWalkError(
                "invalid-params", f"mutant {args.mutant!r} applies to {forced_tool}"
            )
    elif args.cmd:
        client = LineClient.spawn(shlex.split(args.cmd))
        candidate = WireCandidate(client)
    elif args.connect:
        host, _, port = args.connect.rpartition(":")
        if not host or not port.isdigit():
            raise GridWalkError("invalid-params", "--connect expects HOST:PORT")
        client = LineClient.tcp(host, int(port))
        candidate = WireCandidate(client)
    else:
        candidate = reference_candidate()
    tools = [args.tool or forced_tool] if (args.tool or forced_tool) else [
        d.name for d in describe_tools()
    ]
    reports = []
    try:
        for tool in tools:
            report = verify_tool(candidate, tool)
            reports.append(report)
            if report.passed:
                print(
                    f"{tool}: PASS "
                    f"({report.build_passed}/{report.build_total} build, "
                    f"{report.validation_passed}/{report.validation_total} validation)"
                )
            else:
                div = report.first_divergence
                where = f"{div.phase} example {div.index}" if div else "unknown"
                print(f"{tool}: FAIL at {where}")
                if div:
                    print(f"  args     {json.dumps(div.args, sort_keys=True)}")
                    print(f"  expected {json.dumps(div.expected, sort_keys=True)}")
                    print(f"  actual   {json.dumps(div.actual, sort_keys=True)}")
    finally:
        if client is not None:
            client.close()
    if args.out:
        Path(args.out).write_text(
            json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"
        )
        print(f"report -> {args.out}")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_remap_lexicon(args: argparse.Namespace) -> int:
    base = _load_lexicon(args.base) or default_lexicon()
    lexicon = remap_lexicon(base, args.seed, remap_structural=args.structural)
    doc = json.dumps(lexicon.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(doc, encoding="utf-8")
        print(f"lexicon (fingerprint {lexicon_fingerprint(lexicon)[:12]}) -> {args.out}")
    else:
        sys.stdout.write(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridwalk",
        description="grounded walk-to commands on grid worlds: datasets, resolution, evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate benchmark splits to a directory")
    p.add_argument("--spec", required=True, help="preset name(s), 'all', or a spec JSON path")
    p.add_argument("--out", required=True, help="output directory (one subdir per split)")
    p.add_argument("--seed", type=int, help="override the split seed")
    p.add_argument("--episodes", type=int, help="test episodes per split (default 500)")
    p.add_argument("--train-episodes", type=int, help="train episodes (default 10x test)")
    p.add_argument("--lexicon", help="lexicon JSON to render questions with")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("resolve", help="answer every episode with the symbolic resolver")
    p.add_argument("--dataset", required=True, help="episodes JSONL")
    p.add_argument("--out", required=True, help="predictions JSONL")
    p.add_argument("--lexicon", help="lexicon JSON the dataset was rendered with")
    p.set_defaults(fn=_cmd_resolve)

    p = sub.add_parser("evaluate", help="exact-match score predictions against a dataset")
    p.add_argument("--dataset", required=True, help="gold episodes JSONL")
    p.add_argument("--predictions", required=True, help="predictions JSONL")
    p.add_argument("--field", choices=("target", "actions"), default="target")
    p.add_argument("--out", help="write the JSON report here (PNG lands next to it)")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG figure")
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("holdout-check", help="audit a generated split directory")
    p.add_argument("--dir", required=True, help="split directory with manifest.json")
    p.add_argument("--lexicon", help="lexicon JSON the dataset was rendered with")
    p.add_argument("--out", help="write the JSON report here (PNG lands next to it)")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG figure")
    p.set_defaults(fn=_cmd_holdout_check)

    p = sub.add_parser("prompt-pack", help="emit one plain-text prompt pack")
    p.add_argument("--train", required=True, help="demonstration episodes JSONL")
    p.add_argument("--test", required=True, help="test episodes JSONL")
    p.add_argument("--index", type=int, default=0, help="test episode index (default 0)")
    p.add_argument("--k", type=int, default=3, help="demonstrations to include (default 3)")
    p.add_argument("--out", help="write the pack here instead of stdout")
    p.add_argument("--lexicon", help="lexicon JSON to render with")
    p.set_defaults(fn=_cmd_prompt_pack)

    p = sub.add_parser("serve", help="serve the line-delimited JSON protocol")
    p.add_argument("--transport", choices=("stdio", "tcp"), default="stdio")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7455)
    p.add_argument("--dataset", help="episodes JSONL for episode.next / resolve.batch")
    p.add_argument("--lexicon", help="lexicon JSON for lang.parse")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("verify-tool", help="check a tool implementation on its example corpus")
    p.add_argument("--tool", help="tool name (default: all tools)")
    p.add_argument("--mutant", help="run a built-in broken variant instead of the reference")
    p.add_argument("--cmd", help="spawn this command and verify it over stdio")
    p.add_argument("--connect", metavar="HOST:PORT", help="verify a running TCP server")
    p.add_argument("--list-mutants", action="store_true", help="print mutant names and exit")
    p.add_argument("--out", help="write JSON reports here")
    p.set_defaults(fn=_cmd_verify_tool)

    p = sub.add_parser("remap-lexicon", help="swap content words for pronounceable nonsense")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--structural", action="store_true", help="remap structural words too")
    p.add_argument("--base", help="start from this lexicon JSON instead of the default")
    p.add_argument("--out", help="write the lexicon JSON here instead of stdout")
    p.set_defaults(fn=_cmd_remap_lexicon)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except GridWalkError as exc:
        detail = f" {json.dumps(exc.data, sort_keys=True, default=str)}" if exc.data else ""
        print(f"error {exc.code}: {exc.message}{detail}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
