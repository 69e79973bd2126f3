import random

import pytest
from hypothesis import given, strategies as st

from gridwalk.benchgen import random_command
from gridwalk.errors import GridWalkError, ParseError
from gridwalk.language import (
    CONTENT_ROLES,
    CommandAst,
    Lexicon,
    ReferentAst,
    RelClause,
    annotate,
    ast_to_dict,
    clause_count,
    conjunction_length,
    default_lexicon,
    parse_text,
    remap_lexicon,
    render,
    shape_signature,
    substitute_surfaces,
    tokenize,
)

CONJ_SENTENCE = (
    "walk to the small red square that is in the same row as a circle and inside of a box"
)

CONJ_AST = CommandAst(
    "walk_to",
    ReferentAst(
        "the",
        "small",
        "red",
        "square",
        (
            RelClause("same_row", ReferentAst("a", None, None, "circle")),
            RelClause("inside_of", ReferentAst("a", None, None, "box")),
        ),
    ),
)


def test_tokenize_positions():
    tokens = tokenize("walk to the big blue box")
    assert [(t.surface, t.role, t.canonical, t.pos) for t in tokens] == [
        ("walk to", "verb-phrase", "walk_to", 0),
        ("the", "determiner", "the", 8),
        ("big", "size-word", "big", 12),
        ("blue", "color", "blue", 16),
        ("box", "shape-noun", "box", 21),
    ]


def test_tokenize_greedy_longest_match():
    # "in the same row as" must win over reading "in", "the", ... separately
    tokens = tokenize("in the same row as and that is")
    assert [t.canonical for t in tokens] == ["same_row", "and", "that_is"]


def test_unknown_token_position():
    with pytest.raises(ParseError) as e:
        tokenize("walk to the red blob")
    assert e.value.code == "unknown-token"
    assert e.value.position == 16
    assert e.value.data["token"] == "blob"


def test_parse_conjunction_frozen():
    assert parse_text(CONJ_SENTENCE) == CONJ_AST


def test_parse_nested_and_binds_innermost():
    # the "and" continues the clause group of the innermost referent (the square)
    text = (
        "walk to the circle that is in the same row as a square "
        "that is inside of a box and in the same color as a cylinder"
    )
    expected = CommandAst(
        "walk_to",
        ReferentAst(
            "the",
            None,
            None,
            "circle",
            (
                RelClause(
                    "same_row",
                    ReferentAst(
                        "a",
                        None,
                        None,
                        "square",
                        (
                            RelClause("inside_of", ReferentAst("a", None, None, "box")),
                            RelClause(
                                "same_color", ReferentAst("a", None, None, "cylinder")
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )
    assert parse_text(text) == expected


def test_wildcard_noun():
    ast = parse_text("walk to the big object")
    assert ast.target.noun == "object"
    assert ast.target.size_word == "big"
    assert ast.target.color is None


@pytest.mark.parametrize(
    "text",
    [
        "walk to a circle",  # top referent needs "the"
        "walk to the circle that is in the same row as the square",  # nested needs "a"
        "walk to the circle that is inside of a circle",  # inside_of wants box/object
        "walk to the red",  # missing noun
        "walk to the circle extra",  # cannot happen: "extra" is unknown-token
        "walk to the circle that is",  # dangling clause marker
        "the red circle",  # missing verb
        "walk to the circle a square",  # trailing input
        "",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(ParseError) as e:
        parse_text(text)
    assert e.value.code in ("syntax-error", "unknown-token")
    assert isinstance(e.value.position, int)


def test_syntax_error_details():
    with pytest.raises(ParseError) as e:
        parse_text("walk to the circle a square")
    assert e.value.code == "syntax-error"
    assert e.value.position == 19  # offset of the stray "a"
    with pytest.raises(ParseError) as e:
        parse_text("")
    assert e.value.position == 0
    assert "empty input" in e.value.message


def test_render_frozen():
    assert render(CONJ_AST) == CONJ_SENTENCE


def test_render_rejects_ambiguous_ast():
    # non-final tail opens a clause group: its "and" would re-attach on re-parse
    inner = ReferentAst(
        "a", None, None, "square", (RelClause("same_row", ReferentAst("a", None, None, "circle")),)
    )
    ast = CommandAst(
        "walk_to",
        ReferentAst(
            "the",
            None,
            None,
            "circle",
            (
                RelClause("same_color", inner),
                RelClause("same_size", ReferentAst("a", None, None, "box")),
            ),
        ),
    )
    with pytest.raises(GridWalkError) as e:
        render(ast)
    assert e.value.code == "ambiguous-ast"


def test_structure_measures():
    assert clause_count(CONJ_AST) == 2
    assert conjunction_length(CONJ_AST) == 2
    assert shape_signature(CONJ_AST) == "(2(0)(0))"
    bare = parse_text("walk to the red circle")
    assert clause_count(bare) == 0
    assert conjunction_length(bare) == 0
    assert shape_signature(bare) == "(0)"
    chain = parse_text(
        "walk to the circle that is in the same row as a square that is inside of a box"
    )
    assert clause_count(chain) == 2
    assert conjunction_length(chain) == 1
    assert shape_signature(chain) == "(1(1(0)))"


def test_annotate_frozen():
    assert annotate(CONJ_AST) == [
        "step 1 objects: the small red square, "
        "relative clause led by 'that is' connects to step 2 and step 3",
        "step 2 objects: a circle",
        "step 3 objects: a box",
    ]
    nested = parse_text(
        "walk to the circle that is in the same row as a square that is inside of a box"
    )
    assert annotate(nested) == [
        "step 1 objects: the circle, relative clause led by 'that is' connects to step 2",
        "step 2 objects: a square, relative clause led by 'that is' connects to step 3",
        "step 3 objects: a box",
    ]


def test_ast_to_dict():
    doc = ast_to_dict(CONJ_AST)
    assert doc["verb"] == "walk_to"
    assert doc["target"]["noun"] == "square"
    assert [c["relation"] for c in doc["target"]["clauses"]] == ["same_row", "inside_of"]


@given(st.integers(0, 10**9), st.integers(0, 3))
def test_round_trip_random_commands(seed, n_clauses):
    ast = random_command(random.Random(seed), n_clauses)
    text = render(ast)
    assert parse_text(text) == ast
    assert clause_count(ast) == n_clauses


def test_lexicon_validation():
    with pytest.raises(GridWalkError) as e:
        Lexicon({"x": ("verb-phrase", "walk_to"), "y": ("verb-phrase", "walk_to")})
    assert e.value.code == "invalid-lexicon"
    with pytest.raises(GridWalkError) as e:
        Lexicon({"x": ("adjective", "red")})
    assert e.value.code == "invalid-lexicon"
    with pytest.raises(GridWalkError) as e:
        Lexicon({" padded ": ("color", "red")})
    assert e.value.code == "invalid-lexicon"
    with pytest.raises(GridWalkError) as e:
        Lexicon({"two  spaces": ("color", "red")})
    assert e.value.code == "invalid-lexicon"


def test_lexicon_round_trip():
    lex = default_lexicon()
    assert Lexicon.from_dict(lex.to_dict()) == lex
    remapped = remap_lexicon(lex, seed=3)
    again = Lexicon.from_dict(remapped.to_dict())
    assert again == remapped
    assert again.seed == 3
    with pytest.raises(GridWalkError) as e:
        Lexicon.from_dict({"entries": {"x": {"role": "color"}}})
    assert e.value.code == "malformed-document"
    with pytest.raises(GridWalkError) as e:
        Lexicon.from_dict([])
    assert e.value.code == "malformed-document"


def test_substitute_surfaces():
    lex = default_lexicon()
    assert substitute_surfaces(lex, {}) == lex
    swapped = substitute_surfaces(lex, {"red": "rosso"})
    assert swapped.lookup("rosso") == ("color", "red")
    assert swapped.lookup("red") is None
    with pytest.raises(GridWalkError) as e:
        substitute_surfaces(lex, {"nope": "x"})
    assert e.value.code == "invalid-lexicon"
    with pytest.raises(GridWalkError) as e:
        substitute_surfaces(lex, {"red": "blue"})  # collides with a kept surface
    assert e.value.code == "invalid-lexicon"


def test_remap_replaces_content_and_keeps_structure():
    lex = default_lexicon()
    remapped = remap_lexicon(lex, seed=11)
    assert len(remapped) == len(lex)
    originals = dict(lex.items())
    for surface, (role, canonical) in remapped.items():
        if role in CONTENT_ROLES:
            assert surface not in originals
            assert surface.isalpha() and surface.islower() and 4 <= len(surface) <= 6
        else:
            assert originals[surface] == (role, canonical)
    # same seed reproduces the lexicon exactly; structural remap goes further
    assert remap_lexicon(lex, seed=11) == remapped
    full = remap_lexicon(lex, seed=11, remap_structural=True)
    assert all(s not in originals for s, _ in full.items())


@given(st.integers(0, 10**9), st.integers(0, 10**6), st.integers(0, 3))
def test_remapped_round_trip(lex_seed, ast_seed, n_clauses):
    remapped = remap_lexicon(default_lexicon(), lex_seed)
    ast = random_command(random.Random(ast_seed), n_clauses)
    text = render(ast, remapped)
    assert parse_text(text, remapped) == ast
    # the remapped text means nothing to the default lexicon unless the
    # command happens to use structural words only (it never does: nouns
    # are content words)
    with pytest.raises(ParseError):
        parse_text(text)
