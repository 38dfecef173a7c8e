"""Filtering and parsing of raw LLM responses.

Chat models wrap their answers in conversational filler ("I apologize
for the confusion. Here are..."). Responses we request are delimited
with '||'; material before the first delimiter is treated as filler and
dropped. A secondary check keeps only segments that actually contain
the MWE (any inflected variant, same gap tolerance as corpus search).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .corpus import DEFAULT_GAP, find_in_tokens, tokenize
from .errors import ResponseFormatError
from .morphology import mwe_variants

logger = logging.getLogger(__name__)

_BRACKET_RE = re.compile(r"\[([^\[\]]*)\]")


@dataclass(frozen=True)
class Segment:
    """One '||'-delimited piece of a response.

    undelimited marks a leading piece that appeared before any '||' tag;
    such pieces usually carry conversational filler.
    """

    text: str
    undelimited: bool = False


def segment(raw: str) -> list[Segment]:
    """Split on '||', trim, and drop empty pieces. Never contains '||'."""
    parts = raw.split("||")
    leading = not raw.lstrip().startswith("||")
    segments = []
    for i, part in enumerate(parts):
        text = part.strip()
        if not text:
            continue
        segments.append(Segment(text=text, undelimited=(i == 0 and leading)))
    return segments


def contains_mwe(text: str, mwe: str, gap: int = DEFAULT_GAP) -> bool:
    """True iff some inflected variant of the MWE occurs in the text."""
    variants = [list(v.tokens) for v in mwe_variants(mwe)]
    return find_in_tokens(tokenize(text), variants, gap) is not None


def filter_candidates(
    raw: str, mwe: str, *, gap: int = DEFAULT_GAP, require_mwe: bool = True
) -> list[str]:
    """Candidate sentences from a raw response, in order.

    Drops undelimited leading filler and, unless require_mwe is off,
    segments in which no variant of the MWE occurs.
    """
    kept = []
    for seg in segment(raw):
        if seg.undelimited:
            continue
        if require_mwe and not contains_mwe(seg.text, mwe, gap):
            logger.debug("segment lacks %r, dropped: %s", mwe, seg.text)
            continue
        kept.append(seg.text)
    return kept


def parse_mwe_list(raw: str) -> list[str]:
    """Extract the first bracketed, comma-separated list of MWEs.

    Items are trimmed, lowercased, and deduplicated; single-token items
    are dropped (an MWE has at least two tokens).
    """
    match = _BRACKET_RE.search(raw)
    if match is None:
        raise ResponseFormatError(f"no bracketed MWE list found in response: {raw[:80]!r}")
    mwes: list[str] = []
    for item in match.group(1).split(","):
        mwe = " ".join(item.strip().lower().split())
        if not mwe or mwe in mwes:
            continue
        if len(mwe.split()) < 2:
            logger.warning("single-token item %r dropped from MWE list", mwe)
            continue
        mwes.append(mwe)
    return mwes
