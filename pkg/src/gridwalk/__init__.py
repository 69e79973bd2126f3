"""Deterministic engine for grounded walk-to commands on grid worlds.

The pieces, in dependency order: grid worlds (``world``), the command
grammar and lexicon (``language``), the four set-narrowing tools
(``toolset``), question-to-program compilation plus a brute-force
denotation oracle (``resolver``), optimal action planning
(``navigation``), benchmark split generation (``benchgen``), and the
evaluation / verification / serving layer (``harness``).
"""

from . import harness
from .benchgen import (
    PRESET_NAMES,
    AttributePair,
    Episode,
    HoldoutReport,
    SplitSpec,
    StructSignature,
    generate_split,
    holdout_check,
    make_preset,
    read_episodes,
    sample_question,
    sample_world,
    write_episodes,
    write_split,
)
from .errors import GridWalkError, ParseError, ResolutionError
from .harness import em_percent, evaluate_em, verify_tool
from .language import (
    CommandAst,
    Lexicon,
    ReferentAst,
    RelClause,
    annotate,
    default_lexicon,
    parse_text,
    remap_lexicon,
    render,
    tokenize,
)
from .navigation import ACTIONS, plan_actions, simulate
from .resolver import (
    Ref,
    ToolCall,
    ToolProgram,
    compile_command,
    denote_brute_force,
    execute,
    format_program,
    program_from_dict,
    program_to_dict,
    render_demonstration,
)
from .toolset import (
    all_objects,
    call_tool,
    describe_tools,
    filter_by_attribute,
    filter_relationship,
    filter_size,
    unique_target,
)
from .world import (
    COLORS,
    SHAPES,
    Agent,
    GridWorld,
    Obj,
    Position,
    deserialize_world,
    new_world,
    place_object,
    serialize_world,
    world_from_dict,
    world_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "Agent",
    "AttributePair",
    "COLORS",
    "CommandAst",
    "Episode",
    "GridWalkError",
    "GridWorld",
    "HoldoutReport",
    "Lexicon",
    "Obj",
    "PRESET_NAMES",
    "ParseError",
    "Position",
    "Ref",
    "ReferentAst",
    "RelClause",
    "ResolutionError",
    "SHAPES",
    "SplitSpec",
    "StructSignature",
    "ToolCall",
    "ToolProgram",
    "all_objects",
    "annotate",
    "call_tool",
    "compile_command",
    "default_lexicon",
    "denote_brute_force",
    "describe_tools",
    "deserialize_world",
    "em_percent",
    "evaluate_em",
    "execute",
    "filter_by_attribute",
    "filter_relationship",
    "filter_size",
    "format_program",
    "generate_split",
    "harness",
    "holdout_check",
    "make_preset",
    "new_world",
    "parse_text",
    "place_object",
    "plan_actions",
    "program_from_dict",
    "program_to_dict",
    "read_episodes",
    "remap_lexicon",
    "render",
    "render_demonstration",
    "sample_question",
    "sample_world",
    "serialize_world",
    "simulate",
    "tokenize",
    "unique_target",
    "verify_tool",
    "world_from_dict",
    "world_to_dict",
    "write_episodes",
    "write_split",
]
