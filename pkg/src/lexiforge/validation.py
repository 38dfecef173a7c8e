"""Sense validation of candidate sentences and MWE survival.

The model is asked which candidate sentences use the MWE in the seed
verb's sense. Its answer is matched back against the candidates under a
light normalization, so the model cannot sneak in sentences it invented
during validation. An MWE survives iff at least one candidate validates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .filtering import segment

logger = logging.getLogger(__name__)

SOURCE_PATHS = ("llm", "corpus")
VERDICTS = ("pending", "accepted", "rejected")


@dataclass(frozen=True)
class CandidateMwe:
    """One proposed MWE with its evidence and validation outcome."""

    mwe: str
    source_path: str
    candidate_sentences: list[str] = field(default_factory=list)
    validated_sentences: list[str] = field(default_factory=list)
    verdict: str = "pending"
    reason: str | None = None


def build_validation_bindings(
    seed: str, seed_sentences: list[str], mwe: str, candidates: list[str]
) -> dict[str, str]:
    """Template bindings for one MWE's validation step.

    Candidates are laid out one per line, each line '||'-delimited, which
    also shows the model the delimiter we expect back.
    """
    if not candidates:
        raise ValueError(f"no candidate sentences to validate for {mwe!r}")
    return {
        "seed": seed,
        "text": " ".join(seed_sentences),
        "mwe": mwe,
        "candidates": "\n".join(f"|| {c}" for c in candidates),
    }


def _normalize(sentence: str) -> str:
    return " ".join(sentence.split()).casefold().rstrip(".!?")


def parse_validated(raw: str, candidates: list[str]) -> list[str]:
    """Candidates the response named, in candidate order.

    Response segments are matched by normalized equality (case fold,
    collapsed whitespace, no terminal punctuation); segments matching no
    candidate are discarded with a warning.
    """
    known = {_normalize(c): c for c in candidates}
    named = set()
    for seg in segment(raw):
        key = _normalize(seg.text)
        if key in known:
            named.add(key)
        else:
            logger.warning("validation response segment matches no candidate: %s", seg.text)
    return [c for c in candidates if _normalize(c) in named]


def decide(candidate: CandidateMwe) -> CandidateMwe:
    """Final verdict: accepted iff at least one sentence validated."""
    if candidate.validated_sentences:
        return replace(candidate, verdict="accepted")
    return replace(
        candidate, verdict="rejected", reason=candidate.reason or "no sentence validated"
    )
