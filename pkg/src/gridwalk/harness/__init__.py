"""Evaluation, tool verification, prompt packs, and the wire protocol."""

from .evaluate import EvalReport, Mismatch, em_percent, evaluate_em, format_report
from .promptpack import emit_prompt_pack, split_prompt_pack
from .server import LineClient, ServeConfig, Session, WireCandidate, serve
from .verify import (
    LocalCandidate,
    VerificationReport,
    mutant_candidate,
    mutant_names,
    reference_candidate,
    verification_examples,
    verify_tool,
)

__all__ = [
    "EvalReport",
    "Mismatch",
    "em_percent",
    "evaluate_em",
    "format_report",
    "emit_prompt_pack",
    "split_prompt_pack",
    "LineClient",
    "ServeConfig",
    "Session",
    "WireCandidate",
    "serve",
    "LocalCandidate",
    "VerificationReport",
    "mutant_candidate",
    "mutant_names",
    "reference_candidate",
    "verification_examples",
    "verify_tool",
]
