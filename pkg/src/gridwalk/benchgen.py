"""Benchmark generation: seeded worlds and questions, hold-out splits.

A split holds a family of question patterns out of training and requires it
in every test episode. Patterns come in two kinds: an attribute pair (some
referent names this color with this shape noun) and a structural signature
(total clause count, largest conjunction, or the whole clause-tree shape).

Generation is rejection sampling with per-episode seeds derived by hashing
(split seed, split name, role, index), so output is independent of worker
count and identical across runs.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Union

from .errors import GridWalkError
from .language import (
    RELATIONS,
    SIZE_WORDS,
    WILDCARD_NOUN,
    CommandAst,
    Lexicon,
    RelClause,
    ReferentAst,
    clause_count,
    conjunction_length,
    default_lexicon,
    iter_referents,
    parse_text,
    render,
    shape_signature,
)
from .navigation import plan_actions
from .resolver import denote_brute_force
from .world import (
    COLORS,
    ORIENTATIONS,
    SHAPES,
    Agent,
    GridWorld,
    Obj,
    Position,
    new_world,
    place_object,
    world_from_dict,
    world_to_dict,
)


@dataclass(frozen=True)
class AttributePair:
    """Matches when any referent pairs this color with this shape noun."""

    color: str
    shape: str

    def matches(self, ast: CommandAst) -> bool:
        return any(
            r.color == self.color and r.noun == self.shape for r in iter_referents(ast)
        )

    def label(self) -> str:
        return f"attr:{self.color}+{self.shape}"

    def to_dict(self) -> dict[str, str]:
        return {"kind": "attribute", "color": self.color, "shape": self.shape}


@dataclass(frozen=True)
class StructSignature:
    """Matches when every specified structural measure equals the AST's."""

    clause_count: int | None = None
    conjunction_length: int | None = None
    shape: str | None = None

    def matches(self, ast: CommandAst) -> bool:
        if self.clause_count is not None and clause_count(ast) != self.clause_count:
            return False
        if (
            self.conjunction_length is not None
            and conjunction_length(ast) != self.conjunction_length
        ):
            return False
        if self.shape is not None and shape_signature(ast) != self.shape:
            return False
        return True

    def label(self) -> str:
        parts = []
        if self.clause_count is not None:
            parts.append(f"clauses={self.clause_count}")
        if self.conjunction_length is not None:
            parts.append(f"conjunction={self.conjunction_length}")
        if self.shape is not None:
            parts.append(f"shape={self.shape}")
        return "struct:" + ",".join(parts)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"kind": "structure"}
        if self.clause_count is not None:
            doc["clause_count"] = self.clause_count
        if self.conjunction_length is not None:
            doc["conjunction_length"] = self.conjunction_length
        if self.shape is not None:
            doc["shape"] = self.shape
        return doc


Pattern = Union[AttributePair, StructSignature]


def pattern_from_dict(doc: Any) -> Pattern:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise GridWalkError("bad-split-spec", f"pattern needs a 'kind': {doc!r}")
    if doc["kind"] == "attribute":
        return AttributePair(doc["color"], doc["shape"])
    if doc["kind"] == "structure":
        return StructSignature(
            clause_count=doc.get("clause_count"),
            conjunction_length=doc.get("conjunction_length"),
            shape=doc.get("shape"),
        )
    raise GridWalkError("bad-split-spec", f"unknown pattern kind {doc['kind']!r}")


@dataclass(frozen=True)
class SplitSpec:
    """Recipe for one train/test split.

    ``episodes_per_split`` is the test size; train defaults to ten times
    that. At least one pattern must be both forbidden in train and required
    in test, otherwise nothing is held out.
    """

    name: str
    train_forbidden: tuple[Pattern, ...]
    test_required: tuple[Pattern, ...]
    clause_count_range: tuple[int, int] = (0, 2)
    episodes_per_split: int = 500
    train_episodes: int | None = None
    seed: int = 0
    d: int = 6
    n_objects: tuple[int, int] = (6, 10)

    def __post_init__(self) -> None:
        if self.episodes_per_split <= 0:
            raise GridWalkError("bad-split-spec", "episodes_per_split must be positive")
        if self.train_episodes is not None and self.train_episodes < 0:
            raise GridWalkError("bad-split-spec", "train_episodes must be non-negative")
        lo, hi = self.clause_count_range
        if not (0 <= lo <= hi):
            raise GridWalkError("bad-split-spec", f"bad clause count range ({lo}, {hi})")
        if not set(self.train_forbidden) & set(self.test_required):
            raise GridWalkError(
                "bad-split-spec",
                f"split {self.name!r} holds nothing out: no pattern is both "
                "forbidden in train and required in test",
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "train_forbidden": [p.to_dict() for p in self.train_forbidden],
            "test_required": [p.to_dict() for p in self.test_required],
            "clause_count_range": list(self.clause_count_range),
            "episodes_per_split": self.episodes_per_split,
            "train_episodes": self.train_episodes,
            "seed": self.seed,
            "d": self.d,
            "n_objects": list(self.n_objects),
        }

    @classmethod
    def from_dict(cls, doc: Any) -> "SplitSpec":
        if not isinstance(doc, dict):
            raise GridWalkError("bad-split-spec", "split spec must be a JSON object")
        try:
            return cls(
                name=doc["name"],
                train_forbidden=tuple(pattern_from_dict(p) for p in doc["train_forbidden"]),
                test_required=tuple(pattern_from_dict(p) for p in doc["test_required"]),
                clause_count_range=tuple(doc.get("clause_count_range", (0, 2))),
                episodes_per_split=doc.get("episodes_per_split", 500),
                train_episodes=doc.get("train_episodes"),
                seed=doc.get("seed", 0),
                d=doc.get("d", 6),
                n_objects=tuple(doc.get("n_objects", (6, 10))),
            )
        except KeyError as exc:
            raise GridWalkError("bad-split-spec", f"split spec is missing {exc}") from None


@dataclass(frozen=True)
class Episode:
    episode_id: str
    split: str
    seed: int
    world: GridWorld
    question: str
    ast: CommandAst | None
    target_id: str
    gold_actions: tuple[str, ...]


@dataclass(frozen=True)
class QuestionConstraints:
    clause_count: int | None = None
    clause_count_range: tuple[int, int] = (0, 2)
    forbidden: tuple[Pattern, ...] = ()
    required: tuple[Pattern, ...] = ()
    max_tries: int = 1000


# --- world sampling ---------------------------------------------------------


def sample_world(
    d: int,
    n_objects: int,
    seed: int,
    shapes: tuple[str, ...] = SHAPES,
    size_range: tuple[int, int] = (1, 4),
    max_tries_per_object: int = 50,
) -> GridWorld:
    """Deterministic random world; raises unplaceable when space runs out."""
    rng = random.Random(seed)
    agent = Agent(Position(rng.randrange(d), rng.randrange(d)), rng.choice(ORIENTATIONS))
    world = new_world(d, agent)
    for i in range(n_objects):
        for _ in range(max_tries_per_object):
            shape = rng.choice(shapes)
            size = rng.randint(*size_range)
            span = size if shape == "box" else 1
            if span > d:
                continue
            pos = Position(rng.randrange(d - span + 1), rng.randrange(d - span + 1))
            obj = Obj(f"o{i + 1}", shape, rng.choice(COLORS), size, pos)
            try:
                world = place_object(world, obj)
            except GridWalkError:
                continue
            break
        else:
            raise GridWalkError(
                "unplaceable",
                f"could not place object {i + 1} of {n_objects} on a {d}x{d} grid",
            )
    return world


# --- question sampling ------------------------------------------------------

Structure = tuple  # nested tuples; each element is the structure of one clause tail


def _random_structure(rng: random.Random, k: int) -> Structure:
    # non-final tails stay clause-free so the surface form is unambiguous
    if k == 0:
        return ()
    m = rng.randint(1, k)
    children = [() for _ in range(m - 1)]
    children.append(_random_structure(rng, k - m))
    return tuple(children)


def _chain_structure(k: int) -> Structure:
    return () if k == 0 else (_chain_structure(k - 1),)


def _parse_shape(text: str) -> Structure:
    pos = [0]

    def node() -> Structure:
        if pos[0] >= len(text) or text[pos[0]] != "(":
            raise GridWalkError("bad-split-spec", f"bad shape signature {text!r}")
        pos[0] += 1
        start = pos[0]
        while pos[0] < len(text) and text[pos[0]].isdigit():
            pos[0] += 1
        if start == pos[0]:
            raise GridWalkError("bad-split-spec", f"bad shape signature {text!r}")
        count = int(text[start : pos[0]])
        children = tuple(node() for _ in range(count))
        if pos[0] >= len(text) or text[pos[0]] != ")":
            raise GridWalkError("bad-split-spec", f"bad shape signature {text!r}")
        pos[0] += 1
        return children

    result = node()
    if pos[0] != len(text):
        raise GridWalkError("bad-split-spec", f"bad shape signature {text!r}")
    return result


_NOUN_CHOICES = SHAPES + (WILDCARD_NOUN,)


def _fill_referent(
    rng: random.Random, structure: Structure, world: GridWorld | None, top: bool
) -> ReferentAst:
    has_box = world is None or any(o.shape == "box" for o in world.objects)
    relations = [r for r in RELATIONS if r != "inside_of" or has_box]
    clauses = []
    for child in structure:
        relation = rng.choice(relations)
        tail = _fill_referent(rng, child, world, top=False)
        if relation == "inside_of":
            noun = "box" if rng.random() < 0.8 else WILDCARD_NOUN
            tail = replace(tail, noun=noun)
        clauses.append(RelClause(relation, tail))
    noun = rng.choice(_NOUN_CHOICES)
    color = rng.choice(COLORS) if rng.random() < 0.6 else None
    size_word = rng.choice(SIZE_WORDS) if rng.random() < (0.35 if top else 0.2) else None
    return ReferentAst("the" if top else "a", size_word, color, noun, tuple(clauses))


def random_command(rng: random.Random, n_clauses: int) -> CommandAst:
    """Syntactically valid command with the given clause count; no grounding."""
    structure = _random_structure(rng, n_clauses)
    return CommandAst("walk_to", _fill_referent(rng, structure, None, top=True))


def _iter_with_relation(ref: ReferentAst, rel: str | None = None, path: tuple = ()):
    yield path, ref, rel
    for i, clause in enumerate(ref.clauses):
        yield from _iter_with_relation(clause.tail, clause.relation, path + (i,))


def _replace_at(ref: ReferentAst, path: tuple, value: ReferentAst) -> ReferentAst:
    if not path:
        return value
    clauses = list(ref.clauses)
    clause = clauses[path[0]]
    clauses[path[0]] = replace(clause, tail=_replace_at(clause.tail, path[1:], value))
    return replace(ref, clauses=tuple(clauses))


def _inject_pair(rng: random.Random, root: ReferentAst, pair: AttributePair) -> ReferentAst:
    # inside_of tails must stay box or wildcard, so skip them unless the
    # injected shape is itself "box"
    spots = [
        path
        for path, _, rel in _iter_with_relation(root)
        if rel != "inside_of" or pair.shape == "box"
    ]
    path = rng.choice(spots)
    node = root
    for i in path:
        node = node.clauses[i].tail
    return _replace_at(root, path, replace(node, color=pair.color, noun=pair.shape))


def _structural_requirement(required: tuple[Pattern, ...]) -> StructSignature | None:
    for p in required:
        if isinstance(p, StructSignature):
            return p
    return None


def sample_question(world: GridWorld, constraints: QuestionConstraints, seed: int) -> CommandAst:
    """Sample a command whose denotation in ``world`` is a single object.

    Honors clause-count bounds, avoids every forbidden pattern, and makes
    one required pattern hold by construction. Raises
    unsatisfiable-after-retries once the budget is spent.
    """
    rng = random.Random(seed)
    lo, hi = constraints.clause_count_range
    struct_req = _structural_requirement(constraints.required)
    attr_reqs = [p for p in constraints.required if isinstance(p, AttributePair)]
    banned_counts = {
        p.clause_count
        for p in constraints.forbidden
        if isinstance(p, StructSignature)
        and p.clause_count is not None
        and p.conjunction_length is None
        and p.shape is None
    }
    allowed_counts = [k for k in range(lo, hi + 1) if k not in banned_counts]
    for _ in range(constraints.max_tries):
        if struct_req is not None and struct_req.shape is not None:
            structure = _parse_shape(struct_req.shape)
        elif struct_req is not None and struct_req.conjunction_length is not None:
            width = struct_req.conjunction_length
            total = struct_req.clause_count or width
            if total < width:
                raise GridWalkError(
                    "bad-split-spec", "clause count below conjunction length"
                )
            structure = tuple([()] * (width - 1) + [_chain_structure(total - width)])
        elif struct_req is not None and struct_req.clause_count is not None:
            structure = _random_structure(rng, struct_req.clause_count)
        elif constraints.clause_count is not None:
            structure = _random_structure(rng, constraints.clause_count)
        else:
            if not allowed_counts:
                raise GridWalkError(
                    "unsatisfiable-after-retries",
                    "every clause count in range is forbidden",
                    tries=0,
                )
            structure = _random_structure(rng, rng.choice(allowed_counts))
        referent = _fill_referent(rng, structure, world, top=True)
        if attr_reqs:
            referent = _inject_pair(rng, referent, rng.choice(attr_reqs))
        ast = CommandAst("walk_to", referent)
        if any(p.matches(ast) for p in constraints.forbidden):
            continue
        if constraints.required and not any(p.matches(ast) for p in constraints.required):
            continue
        if len(denote_brute_force(ast, world)) != 1:
            continue
        return ast
    raise GridWalkError(
        "unsatisfiable-after-retries",
        f"no unique-target question found in {constraints.max_tries} tries",
        tries=constraints.max_tries,
    )


# --- split generation -------------------------------------------------------

_WORLD_ROUNDS = 20
_TRIES_PER_WORLD = 50


def _derive_seed(*parts: Any) -> int:
    digest = hashlib.blake2s(":".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def _constraints_for(spec: SplitSpec, role: str) -> QuestionConstraints:
    if role == "train":
        return QuestionConstraints(
            clause_count_range=spec.clause_count_range,
            forbidden=spec.train_forbidden,
            max_tries=_TRIES_PER_WORLD,
        )
    return QuestionConstraints(
        clause_count_range=spec.clause_count_range,
        required=spec.test_required,
        max_tries=_TRIES_PER_WORLD,
    )


def _generate_role(
    spec: SplitSpec, role: str, count: int, lexicon: Lexicon | None
) -> list[Episode]:
    constraints = _constraints_for(spec, role)
    episodes = []
    for i in range(count):
        episode_seed = _derive_seed(spec.seed, spec.name, role, i)
        rng = random.Random(episode_seed)
        for _ in range(_WORLD_ROUNDS):
            world_seed = rng.getrandbits(62)
            question_seed = rng.getrandbits(62)
            n_objects = rng.randint(*spec.n_objects)
            world = sample_world(spec.d, n_objects, world_seed)
            try:
                ast = sample_question(world, constraints, question_seed)
            except GridWalkError as exc:
                if exc.code != "unsatisfiable-after-retries":
                    raise
                continue
            target_id = denote_brute_force(ast, world)[0]
            episodes.append(
                Episode(
                    episode_id=f"{spec.name}-{role}-{i:05d}",
                    split=spec.name,
                    seed=episode_seed,
                    world=world,
                    question=render(ast, lexicon),
                    ast=ast,
                    target_id=target_id,
                    gold_actions=tuple(plan_actions(world, target_id)),
                )
            )
            break
        else:
            raise GridWalkError(
                "unsatisfiable-spec",
                f"split {spec.name!r}: gave up on {role} episode {i} after "
                f"{_WORLD_ROUNDS * _TRIES_PER_WORLD} question tries",
            )
    return episodes


def generate_split(
    spec: SplitSpec, lexicon: Lexicon | None = None
) -> tuple[list[Episode], list[Episode]]:
    """Generate (train, test) episode lists for one split spec."""
    n_train = (
        spec.train_episodes
        if spec.train_episodes is not None
        else spec.episodes_per_split * 10
    )
    train = _generate_role(spec, "train", n_train, lexicon)
    test = _generate_role(spec, "test", spec.episodes_per_split, lexicon)
    return train, test


# --- dataset files ----------------------------------------------------------


def episode_to_record(episode: Episode) -> dict[str, Any]:
    return {
        "episode_id": episode.episode_id,
        "split": episode.split,
        "seed": episode.seed,
        "question": episode.question,
        "target_id": episode.target_id,
        "actions": " ".join(episode.gold_actions),
        "world": world_to_dict(episode.world),
    }


def episode_from_record(
    doc: Any, lexicon: Lexicon | None = None, parse_questions: bool = True
) -> Episode:
    if not isinstance(doc, dict):
        raise GridWalkError("malformed-document", "episode record must be a JSON object")
    for key in ("episode_id", "split", "seed", "question", "target_id", "actions", "world"):
        if key not in doc:
            raise GridWalkError("malformed-document", f"episode record is missing {key!r}")
    world = world_from_dict(doc["world"])
    ast = parse_text(doc["question"], lexicon) if parse_questions else None
    actions = tuple(doc["actions"].split()) if doc["actions"] else ()
    return Episode(
        episode_id=doc["episode_id"],
        split=doc["split"],
        seed=doc["seed"],
        world=world,
        question=doc["question"],
        ast=ast,
        target_id=doc["target_id"],
        gold_actions=actions,
    )


def write_episodes(episodes: Iterable[Episode], path: str | Path) -> str:
    """Write one JSON record per line; returns the file's sha256 hex digest."""
    path = Path(path)
    lines = [
        json.dumps(episode_to_record(ep), sort_keys=True, separators=(",", ":"))
        for ep in episodes
    ]
    data = ("\n".join(lines) + "\n") if lines else ""
    path.write_text(data, encoding="utf-8")
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


def read_episodes(
    path: str | Path, lexicon: Lexicon | None = None, parse_questions: bool = True
) -> list[Episode]:
    episodes = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GridWalkError("malformed-document", f"cannot read {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GridWalkError(
                "malformed-document", f"{path} line {line_no}: invalid JSON: {exc}"
            ) from exc
        episodes.append(episode_from_record(doc, lexicon, parse_questions))
    return episodes


def lexicon_fingerprint(lexicon: Lexicon | None) -> str:
    lex = lexicon or default_lexicon()
    canon = json.dumps(lex.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def write_split(
    train: list[Episode],
    test: list[Episode],
    spec: SplitSpec,
    out_dir: str | Path,
    lexicon: Lexicon | None = None,
) -> dict[str, Any]:
    """Write train.jsonl, test.jsonl and manifest.json; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digests = {
        "train.jsonl": write_episodes(train, out / "train.jsonl"),
        "test.jsonl": write_episodes(test, out / "test.jsonl"),
    }
    manifest = {
        "schema_version": 1,
        "split": spec.name,
        "seed": spec.seed,
        "spec": spec.to_dict(),
        "counts": {"train": len(train), "test": len(test)},
        "digests": digests,
        "lexicon_fingerprint": lexicon_fingerprint(lexicon),
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return manifest


# --- hold-out audit ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    episode_id: str
    kind: str  # "forbidden-in-train" | "missing-required-in-test"
    pattern: str

    def to_dict(self) -> dict[str, str]:
        return {"episode_id": self.episode_id, "kind": self.kind, "pattern": self.pattern}


@dataclass(frozen=True)
class HoldoutReport:
    split: str
    n_train: int
    n_test: int
    violations: tuple[Violation, ...]
    coverage: dict[str, int] = field(compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "split": self.split,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "violations": [v.to_dict() for v in self.violations],
            "coverage": dict(self.coverage),
        }


def _ast_of(episode: Episode, lexicon: Lexicon | None) -> CommandAst:
    if episode.ast is not None:
        return episode.ast
    return parse_text(episode.question, lexicon)


def holdout_check(
    train: list[Episode],
    test: list[Episode],
    spec: SplitSpec,
    lexicon: Lexicon | None = None,
) -> HoldoutReport:
    """Audit a generated split against its own spec.

    Scans every train question for forbidden patterns and every test
    question for at least one required pattern. Coverage attributes each
    test episode to the first required pattern it contains; the counts,
    including the "uncovered" bucket, sum to the test episode count.
    """
    violations: list[Violation] = []
    for episode in train:
        ast = _ast_of(episode, lexicon)
        for pattern in spec.train_forbidden:
            if pattern.matches(ast):
                violations.append(
                    Violation(episode.episode_id, "forbidden-in-train", pattern.label())
                )
    coverage = {pattern.label(): 0 for pattern in spec.test_required}
    coverage["uncovered"] = 0
    for episode in test:
        ast = _ast_of(episode, lexicon)
        for pattern in spec.test_required:
            if pattern.matches(ast):
                coverage[pattern.label()] += 1
                break
        else:
            coverage["uncovered"] += 1
            violations.append(
                Violation(episode.episode_id, "missing-required-in-test", "any required")
            )
    return HoldoutReport(
        split=spec.name,
        n_train=len(train),
        n_test=len(test),
        violations=tuple(violations),
        coverage=coverage,
    )


# --- built-in presets --------------------------------------------------------

_ATTRIBUTE_PRESETS: dict[str, tuple[str, str]] = {
    "A1": ("green", "circle"),
    "A2": ("yellow", "square"),
    "A3": ("red", "cylinder"),
    "B1": ("blue", "box"),
    "B2": ("yellow", "cylinder"),
    "S1": ("yellow", "circle"),
    "S2": ("green", "square"),
    "S3": ("blue", "circle"),
    "S4": ("red", "box"),
    "S5": ("green", "cylinder"),
    "S6": ("yellow", "box"),
}

_C2_SHAPE = "(2(0)(1(0)))"

PRESET_NAMES = (
    "A1", "A2", "A3",
    "B1", "B2",
    "C1", "C2",
    "P1", "P2", "P3",
    "S1", "S2", "S3", "S4", "S5", "S6",
)


def make_preset(
    name: str,
    episodes_per_split: int = 500,
    train_episodes: int | None = None,
    seed: int | None = None,
) -> SplitSpec:
    """Built-in split recipes; sizes and seed may be overridden."""
    if name not in PRESET_NAMES:
        raise GridWalkError("bad-split-spec", f"unknown preset {name!r}")
    if seed is None:
        seed = 1000 + PRESET_NAMES.index(name)
    common = dict(
        episodes_per_split=episodes_per_split, train_episodes=train_episodes, seed=seed
    )
    if name in _ATTRIBUTE_PRESETS:
        color, shape = _ATTRIBUTE_PRESETS[name]
        held_out: Pattern = AttributePair(color, shape)
        return SplitSpec(
            name=name,
            train_forbidden=(held_out,),
            test_required=(held_out,),
            clause_count_range=(0, 2),
            **common,
        )
    if name == "C1":
        held_out = StructSignature(conjunction_length=3)
        return SplitSpec(
            name=name,
            train_forbidden=(held_out,),
            test_required=(held_out,),
            clause_count_range=(0, 3),
            **common,
        )
    if name == "C2":
        held_out = StructSignature(shape=_C2_SHAPE)
        return SplitSpec(
            name=name,
            train_forbidden=(held_out,),
            test_required=(held_out,),
            clause_count_range=(0, 3),
            **common,
        )
    # P1..P3: the test side is pinned to an exact clause count that never
    # occurs in train
    k = int(name[1])
    held_out = StructSignature(clause_count=k)
    return SplitSpec(
        name=name,
        train_forbidden=(held_out,),
        test_required=(held_out,),
        clause_count_range=(0, 3),
        **common,
    )
