"""Exact-match evaluation of predictions against gold episodes."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Mapping, Sequence

from ..benchgen import Episode
from ..errors import GridWalkError

FIELDS = ("target", "actions")


def em_percent(n_match: int, n_total: int) -> float:
    """Exact-match percentage, rounded half-up to one decimal."""
    if n_total <= 0:
        raise GridWalkError("invalid-params", "exact match needs a non-empty gold set")
    value = (Decimal(n_match) * 100 / Decimal(n_total)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )
    return float(value)


@dataclass(frozen=True)
class Mismatch:
    episode_id: str
    predicted: str | None
    gold: str

    def to_dict(self) -> dict[str, Any]:
        return {"episode_id": self.episode_id, "predicted": self.predicted, "gold": self.gold}


@dataclass(frozen=True)
class EvalReport:
    split: str
    field: str
    n_total: int
    n_match: int
    em_percent: float
    mismatches: tuple[Mismatch, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "split": self.split,
            "field": self.field,
            "n_total": self.n_total,
            "n_match": self.n_match,
            "em_percent": self.em_percent,
            "mismatches": [m.to_dict() for m in self.mismatches],
        }


def gold_value(episode: Episode, field: str) -> str:
    if field == "target":
        return episode.target_id
    if field == "actions":
        return " ".join(episode.gold_actions)
    raise GridWalkError("invalid-params", f"field must be one of {FIELDS}, got {field!r}")


def evaluate_em(
    predictions: Mapping[str, str],
    gold: Sequence[Episode],
    field: str = "target",
) -> EvalReport:
    """Compare predictions to gold episode values with exact string equality.

    A gold episode without a prediction counts as a mismatch and is listed
    with predicted None. A prediction whose episode id is not in the gold
    set raises unknown-episode-id.
    """
    if field not in FIELDS:
        raise GridWalkError("invalid-params", f"field must be one of {FIELDS}, got {field!r}")
    if not gold:
        raise GridWalkError("invalid-params", "gold episode set is empty")
    known = {ep.episode_id for ep in gold}
    unknown = sorted(set(predictions) - known)
    if unknown:
        raise GridWalkError(
            "unknown-episode-id",
            f"{len(unknown)} prediction(s) reference unknown episodes, first {unknown[0]!r}",
            episode_ids=unknown,
        )
    n_match = 0
    mismatches = []
    for episode in sorted(gold, key=lambda ep: ep.episode_id):
        want = gold_value(episode, field)
        got = predictions.get(episode.episode_id)
        if got == want:
            n_match += 1
        else:
            mismatches.append(Mismatch(episode.episode_id, got, want))
    splits = {ep.split for ep in gold}
    split = splits.pop() if len(splits) == 1 else "mixed"
    return EvalReport(
        split=split,
        field=field,
        n_total=len(gold),
        n_match=n_match,
        em_percent=em_percent(n_match, len(gold)),
        mismatches=tuple(mismatches),
    )


def format_report(report: EvalReport, max_mismatches: int = 5) -> str:
    """Small fixed-width table plus the first few mismatches."""
    lines = [
        f"{'split':<10} {'field':<8} {'total':>6} {'match':>6} {'EM':>6}",
        f"{report.split:<10} {report.field:<8} {report.n_total:>6} "
        f"{report.n_match:>6} {report.em_percent:>6.1f}",
    ]
    for mismatch in report.mismatches[:max_mismatches]:
        lines.append(
            f"  mismatch {mismatch.episode_id}: predicted={mismatch.predicted!r} "
            f"gold={mismatch.gold!r}"
        )
    hidden = len(report.mismatches) - max_mismatches
    if hidden > 0:
        lines.append(f"  ... {hidden} more mismatches")
    return "\n".join(lines)
