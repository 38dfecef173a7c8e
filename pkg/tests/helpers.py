"""Independent oracles used to cross-check the library's answers.

These deliberately re-derive results from first principles (raw fixture
JSON, exhaustive scans) instead of calling the code paths they check.
"""

from __future__ import annotations

import json
import re
from itertools import product
from pathlib import Path


def bfs_ancestors(parents_of: dict[str, list[str]], start: str) -> set[str]:
    """All concepts reachable from `start` via parent links, including start."""
    seen = {start}
    frontier = [start]
    while frontier:
        name = frontier.pop()
        for parent in parents_of[name]:
            if parent not in seen:
                seen.add(parent)
                frontier.append(parent)
    return seen


def load_parents_map(ontology_path: Path) -> dict[str, list[str]]:
    data = json.loads(ontology_path.read_text("utf-8"))
    return {c["name"]: list(c["parents"]) for c in data}


def noun_ids_denoting(lexicon_path: Path, concept: str) -> list[str]:
    """Scan the raw lexicon JSON for non-learned noun senses of a concept."""
    data = json.loads(lexicon_path.read_text("utf-8"))
    return sorted(
        s["sense_id"]
        for s in data
        if s["pos"] == "noun" and not s["learned"] and s["sem_struc"]["concept"] == concept
    )


def cross_product_fillers(lexicon_path: Path, constraints: dict[str, str]) -> set[tuple]:
    """Brute-force cross product of eligible fillers, as (role, id) tuple sets."""
    per_role = {
        role: noun_ids_denoting(lexicon_path, concept) for role, concept in constraints.items()
    }
    roles = sorted(per_role)
    return {
        tuple(zip(roles, combo)) for combo in product(*(per_role[role] for role in roles))
    }


# --- brute-force discontinuous matching ------------------------------------

_WORD_RE = re.compile(r"[a-z0-9]+")


def oracle_tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def oracle_match(tokens: list[str], components: list[str], gap: int) -> bool:
    """Exhaustive check: components occur in order, each within `gap` tokens."""

    def rest(idx: int, prev: int) -> bool:
        if idx == len(components):
            return True
        for j in range(prev + 1, min(prev + 1 + gap + 1, len(tokens))):
            if tokens[j] == components[idx] and rest(idx + 1, j):
                return True
        return False

    return any(
        tokens[start] == components[0] and rest(1, start) for start in range(len(tokens))
    )


def oracle_find(sentences: list[str], variants: list[list[str]], gap: int) -> list[int]:
    """Indices of sentences matched by any variant, in corpus order."""
    matched = []
    for i, sentence in enumerate(sentences):
        tokens = oracle_tokens(sentence)
        if any(oracle_match(tokens, components, gap) for components in variants):
            matched.append(i)
    return matched
