"""Command language: lexicon, tokenizer, parser, renderer, step annotator.

Grammar over canonical ids (surface forms live in the lexicon):

    Command  := VERB Referent
    Referent := DET [SIZE] [COLOR] NOUN [Clauses]
    Clauses  := "that is" Relation Referent ("and" Relation Referent)*

The top-level referent uses determiner "the", nested referents use "a".
An "and" continuation binds to the innermost referent that opened a clause
group, so only ASTs whose non-final clause tails are clause-free have an
unambiguous surface form; render() rejects anything else.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator

from .errors import GridWalkError, ParseError
from .world import COLORS, SHAPES

ROLES = (
    "verb-phrase",
    "determiner",
    "clause-marker",
    "connective",
    "size-word",
    "color",
    "shape-noun",
    "relation-phrase",
)
RELATIONS = ("same_row", "same_column", "same_color", "same_shape", "same_size", "inside_of")
SIZE_WORDS = ("small", "big")
WILDCARD_NOUN = "object"
NOUNS = SHAPES + (WILDCARD_NOUN,)

# roles whose surfaces get replaced by a symbolic remap; structural roles
# (determiners, markers, the verb) are kept unless explicitly requested
CONTENT_ROLES = frozenset({"color", "shape-noun", "size-word", "relation-phrase"})

_DEFAULT_ENTRIES: dict[str, tuple[str, str]] = {
    "walk to": ("verb-phrase", "walk_to"),
    "the": ("determiner", "the"),
    "a": ("determiner", "a"),
    "that is": ("clause-marker", "that_is"),
    "and": ("connective", "and"),
    "small": ("size-word", "small"),
    "big": ("size-word", "big"),
    "red": ("color", "red"),
    "blue": ("color", "blue"),
    "green": ("color", "green"),
    "yellow": ("color", "yellow"),
    "circle": ("shape-noun", "circle"),
    "square": ("shape-noun", "square"),
    "cylinder": ("shape-noun", "cylinder"),
    "box": ("shape-noun", "box"),
    "object": ("shape-noun", "object"),
    "in the same row as": ("relation-phrase", "same_row"),
    "in the same column as": ("relation-phrase", "same_column"),
    "in the same color as": ("relation-phrase", "same_color"),
    "in the same shape as": ("relation-phrase", "same_shape"),
    "in the same size as": ("relation-phrase", "same_size"),
    "inside of": ("relation-phrase", "inside_of"),
}


class Lexicon:
    """Surface-form table: each surface maps to one (role, canonical) pair.

    Surfaces are unique keys and the (role, canonical) pairing is one-to-one,
    so any rewrite that preserves the pairs is a bijection over surfaces.
    """

    def __init__(self, entries: dict[str, tuple[str, str]], seed: int | None = None):
        by_pair: dict[tuple[str, str], str] = {}
        for surface, (role, canonical) in entries.items():
            if not surface or surface != " ".join(surface.split()):
                raise GridWalkError(
                    "invalid-lexicon", f"surface {surface!r} must be space-normalized words"
                )
            if role not in ROLES:
                raise GridWalkError("invalid-lexicon", f"unknown role {role!r} for {surface!r}")
            pair = (role, canonical)
            if pair in by_pair:
                raise GridWalkError(
                    "invalid-lexicon",
                    f"{role}/{canonical} maps from both {by_pair[pair]!r} and {surface!r}",
                )
            by_pair[pair] = surface
        self._entries = dict(entries)
        self._by_pair = by_pair
        self.seed = seed
        self.max_phrase_words = max((len(s.split()) for s in entries), default=1)

    def lookup(self, surface: str) -> tuple[str, str] | None:
        return self._entries.get(surface)

    def surface(self, role: str, canonical: str) -> str:
        try:
            return self._by_pair[(role, canonical)]
        except KeyError:
            raise GridWalkError(
                "invalid-lexicon", f"lexicon has no surface for {role}/{canonical}"
            ) from None

    def items(self):
        return self._entries.items()

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lexicon) and self._entries == other._entries

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "entries": {
                s: {"role": role, "canonical": canonical}
                for s, (role, canonical) in sorted(self._entries.items())
            }
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc

    @classmethod
    def from_dict(cls, doc: Any) -> "Lexicon":
        if not isinstance(doc, dict) or not isinstance(doc.get("entries"), dict):
            raise GridWalkError("malformed-document", "lexicon document needs an 'entries' object")
        entries = {}
        for surface, entry in doc["entries"].items():
            if not isinstance(entry, dict) or "role" not in entry or "canonical" not in entry:
                raise GridWalkError(
                    "malformed-document", f"lexicon entry {surface!r} needs role and canonical"
                )
            entries[surface] = (entry["role"], entry["canonical"])
        seed = doc.get("seed")
        return cls(entries, seed=seed)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    return Lexicon(dict(_DEFAULT_ENTRIES))


@dataclass(frozen=True)
class Token:
    surface: str
    role: str
    canonical: str
    pos: int


def tokenize(text: str, lexicon: Lexicon | None = None) -> list[Token]:
    """Greedy longest-match tokenization; every word must be consumed.

    Raises:
        ParseError: unknown-token with the character offset of the first
            word that starts no lexicon entry.
    """
    lex = lexicon or default_lexicon()
    words = [(m.group(0), m.start()) for m in re.finditer(r"\S+", text)]
    tokens: list[Token] = []
    i = 0
    while i < len(words):
        for n in range(min(lex.max_phrase_words, len(words) - i), 0, -1):
            surface = " ".join(w for w, _ in words[i : i + n])
            hit = lex.lookup(surface)
            if hit is not None:
                tokens.append(Token(surface, hit[0], hit[1], words[i][1]))
                i += n
                break
        else:
            raise ParseError(
                "unknown-token",
                f"unknown token {words[i][0]!r}",
                position=words[i][1],
                token=words[i][0],
            )
    return tokens


@dataclass(frozen=True)
class RelClause:
    relation: str
    tail: "ReferentAst"


@dataclass(frozen=True)
class ReferentAst:
    determiner: str
    size_word: str | None
    color: str | None
    noun: str
    clauses: tuple[RelClause, ...] = ()


@dataclass(frozen=True)
class CommandAst:
    verb: str
    target: ReferentAst


def _referent_of(node: CommandAst | ReferentAst) -> ReferentAst:
    return node.target if isinstance(node, CommandAst) else node


def iter_referents(node: CommandAst | ReferentAst) -> Iterator[ReferentAst]:
    """All referents in pre-order (head before its clause tails)."""
    ref = _referent_of(node)
    yield ref
    for clause in ref.clauses:
        yield from iter_referents(clause.tail)


def clause_count(node: CommandAst | ReferentAst) -> int:
    ref = _referent_of(node)
    return sum(1 + clause_count(c.tail) for c in ref.clauses)


def conjunction_length(node: CommandAst | ReferentAst) -> int:
    """Largest clause group size on any single referent."""
    return max(len(r.clauses) for r in iter_referents(node))


def shape_signature(node: CommandAst | ReferentAst) -> str:
    """Clause-tree shape, e.g. "(0)" bare, "(1(0))" one clause."""
    ref = _referent_of(node)
    return f"({len(ref.clauses)}{''.join(shape_signature(c.tail) for c in ref.clauses)})"


def parse(tokens: list[Token]) -> CommandAst:
    """Recursive-descent parse of a token list into a CommandAst."""
    pos = 0

    def peek() -> Token | None:
        return tokens[pos] if pos < len(tokens) else None

    def fail(message: str, expected: set[str]) -> None:
        tok = peek()
        if tok is not None:
            at = tok.pos
            message = f"{message}, found {tok.surface!r}"
        elif tokens:
            at = tokens[-1].pos + len(tokens[-1].surface)
            message = f"{message}, found end of input"
        else:
            at = 0
            message = f"{message}, found empty input"
        raise ParseError("syntax-error", message, position=at, expected=sorted(expected))

    def take(role: str, what: str) -> Token:
        nonlocal pos
        tok = peek()
        if tok is None or tok.role != role:
            fail(f"expected {what}", {role})
        pos += 1
        return tok

    def at_role(role: str) -> bool:
        tok = peek()
        return tok is not None and tok.role == role

    def referent(top: bool) -> ReferentAst:
        nonlocal pos
        det_tok = take("determiner", "a determiner")
        if top and det_tok.canonical != "the":
            raise ParseError(
                "syntax-error",
                "the target referent must use 'the'",
                position=det_tok.pos,
                expected=["determiner"],
            )
        if not top and det_tok.canonical != "a":
            raise ParseError(
                "syntax-error",
                "nested referents must use 'a'",
                position=det_tok.pos,
                expected=["determiner"],
            )
        size_word = take("size-word", "a size word").canonical if at_role("size-word") else None
        color = take("color", "a color").canonical if at_role("color") else None
        noun = take("shape-noun", "a shape noun").canonical
        clauses: list[RelClause] = []
        if at_role("clause-marker"):
            pos += 1
            clauses.append(rel_clause())
            while at_role("connective"):
                pos += 1
                clauses.append(rel_clause())
        return ReferentAst(det_tok.canonical, size_word, color, noun, tuple(clauses))

    def rel_clause() -> RelClause:
        rel_tok = take("relation-phrase", "a relation")
        tail = referent(top=False)
        if rel_tok.canonical == "inside_of" and tail.noun not in ("box", WILDCARD_NOUN):
            raise ParseError(
                "syntax-error",
                f"'inside of' needs a box or wildcard referent, got {tail.noun!r}",
                position=rel_tok.pos,
                expected=["shape-noun"],
            )
        return RelClause(rel_tok.canonical, tail)

    verb = take("verb-phrase", "a verb phrase")
    target = referent(top=True)
    if peek() is not None:
        fail("trailing input after the command", {"end-of-input"})
    return CommandAst(verb.canonical, target)


def parse_text(text: str, lexicon: Lexicon | None = None) -> CommandAst:
    return parse(tokenize(text, lexicon))


def _check_renderable(ref: ReferentAst) -> None:
    # a non-final tail with its own clause group would re-capture the "and"
    for clause in ref.clauses[:-1]:
        if clause.tail.clauses:
            raise GridWalkError(
                "ambiguous-ast",
                "non-final clause tail opens its own clause group; "
                "the rendered text would not parse back to this AST",
            )
    for clause in ref.clauses:
        _check_renderable(clause.tail)


def _base_words(ref: ReferentAst, lex: Lexicon) -> list[str]:
    words = [lex.surface("determiner", ref.determiner)]
    if ref.size_word is not None:
        words.append(lex.surface("size-word", ref.size_word))
    if ref.color is not None:
        words.append(lex.surface("color", ref.color))
    words.append(lex.surface("shape-noun", ref.noun))
    return words


def _render_referent(ref: ReferentAst, lex: Lexicon, words: list[str]) -> None:
    words.extend(_base_words(ref, lex))
    for i, clause in enumerate(ref.clauses):
        if i == 0:
            words.append(lex.surface("clause-marker", "that_is"))
        else:
            words.append(lex.surface("connective", "and"))
        words.append(lex.surface("relation-phrase", clause.relation))
        _render_referent(clause.tail, lex, words)


def render(ast: CommandAst, lexicon: Lexicon | None = None) -> str:
    """Render an AST back to its canonical surface string."""
    lex = lexicon or default_lexicon()
    _check_renderable(ast.target)
    words = [lex.surface("verb-phrase", ast.verb)]
    _render_referent(ast.target, lex, words)
    return " ".join(words)


def annotate(ast: CommandAst | ReferentAst, lexicon: Lexicon | None = None) -> list[str]:
    """Numbered step annotations, one per referent in pre-order.

    A referent with clauses names the steps its clause tails resolve to,
    e.g. "step 1 objects: the small red square, relative clause led by
    'that is' connects to step 2".
    """
    lex = lexicon or default_lexicon()
    out: list[str] = []

    def visit(ref: ReferentAst, num: int) -> int:
        starts = []
        nxt = num + 1
        for clause in ref.clauses:
            starts.append(nxt)
            nxt += clause_count(clause.tail) + 1
        line = f"step {num} objects: {' '.join(_base_words(ref, lex))}"
        if starts:
            joined = " and ".join(f"step {s}" for s in starts)
            line += f", relative clause led by 'that is' connects to {joined}"
        out.append(line)
        for clause, start in zip(ref.clauses, starts):
            visit(clause.tail, start)
        return nxt

    visit(_referent_of(ast), 1)
    return out


def ast_to_dict(node: CommandAst | ReferentAst) -> dict[str, Any]:
    if isinstance(node, CommandAst):
        return {"verb": node.verb, "target": ast_to_dict(node.target)}
    return {
        "determiner": node.determiner,
        "size_word": node.size_word,
        "color": node.color,
        "noun": node.noun,
        "clauses": [
            {"relation": c.relation, "tail": ast_to_dict(c.tail)} for c in node.clauses
        ],
    }


def substitute_surfaces(lexicon: Lexicon, mapping: dict[str, str]) -> Lexicon:
    """Replace surface forms wholesale; (role, canonical) pairs are untouched.

    An empty mapping returns an equal lexicon. New surfaces must not collide
    with each other or with any surface that stays.
    """
    for old in mapping:
        if lexicon.lookup(old) is None:
            raise GridWalkError("invalid-lexicon", f"cannot substitute unknown surface {old!r}")
    entries = {mapping.get(s, s): rc for s, rc in lexicon.items()}
    if len(entries) != len(lexicon):
        raise GridWalkError("invalid-lexicon", "surface substitution collides")
    return Lexicon(entries, seed=lexicon.seed)


_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


def _pronounceable(rng: random.Random) -> str:
    # alternating consonant-vowel, 4 to 6 letters
    syllables = rng.choice((2, 2, 3))
    word = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(syllables))
    if syllables == 2 and rng.random() < 0.5:
        word += rng.choice(_CONSONANTS)
    return word


def remap_lexicon(lexicon: Lexicon, seed: int, remap_structural: bool = False) -> Lexicon:
    """Bijectively replace content-word surfaces with pronounceable symbols.

    Structural surfaces (determiners, "that is", "and", the verb phrase) are
    kept unless ``remap_structural`` is set. Fresh symbols are checked against
    every existing surface and against the single words inside multi-word
    surfaces, so tokenization stays unambiguous.
    """
    rng = random.Random(seed)
    roles = set(ROLES) if remap_structural else set(CONTENT_ROLES)
    reserved: set[str] = set()
    for surface, _ in lexicon.items():
        reserved.add(surface)
        reserved.update(surface.split())
    mapping: dict[str, str] = {}
    for surface, (role, _) in sorted(lexicon.items()):
        if role not in roles:
            continue
        while True:
            symbol = _pronounceable(rng)
            if symbol not in reserved:
                break
        reserved.add(symbol)
        mapping[surface] = symbol
    remapped = substitute_surfaces(lexicon, mapping)
    remapped.seed = seed
    return remapped
