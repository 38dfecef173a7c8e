"""English verb paradigms and surface variants of multiword expressions.

Inflection is rule-based (-s/-es, -ing with e-drop and final-consonant
doubling, -ed) with an irregular-verb table overriding the rules. The
table ships as package data so it can be reviewed and extended without
touching code.

The same paradigms serve sentence realization (past tense) and corpus
search (every inflected variant of an MWE's head verb).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

FEATURES = ("base", "third_singular", "gerund", "past", "past_participle")

_LEMMA_RE = re.compile(r"^[a-z]+(?:-[a-z]+)*$")
_VOWELS = "aeiou"


@dataclass(frozen=True)
class VerbParadigm:
    """The five inflected forms of one verb lemma."""

    lemma: str
    base: str
    third_singular: str
    gerund: str
    past: str
    past_participle: str

    def as_dict(self) -> dict[str, str]:
        return {feature: getattr(self, feature) for feature in FEATURES}

    def distinct_forms(self) -> tuple[str, ...]:
        """Surface forms in paradigm order, duplicates removed."""
        seen: list[str] = []
        for feature in FEATURES:
            form = getattr(self, feature)
            if form not in seen:
                seen.append(form)
        return tuple(seen)


@dataclass(frozen=True)
class MweVariant:
    """One MWE surface variant: inflected head plus unchanged tail tokens."""

    tokens: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@lru_cache(maxsize=1)
def _irregular_table() -> dict[str, dict[str, str]]:
    # lemma<TAB>past<TAB>past_participle[<TAB>gerund[<TAB>third]]
    # empty optional columns fall back to the rules
    table: dict[str, dict[str, str]] = {}
    text = resources.files("lexiforge").joinpath("data/irregular_verbs.tsv").read_text("utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3:
            raise ValueError(f"irregular_verbs.tsv line {lineno}: need at least 3 columns")
        entry = {"past": cols[1], "past_participle": cols[2]}
        if len(cols) > 3 and cols[3]:
            entry["gerund"] = cols[3]
        if len(cols) > 4 and cols[4]:
            entry["third_singular"] = cols[4]
        table[cols[0]] = entry
    return table


def _doubles_final_consonant(lemma: str) -> bool:
    # orthographic CVC check, restricted to single-vowel-group lemmas so
    # "visit"/"open" stay undoubled; stressed multisyllables (occur,
    # admit, ...) are handled by the irregular table
    if len(lemma) < 3:
        return False
    a, b, c = lemma[-3], lemma[-2], lemma[-1]
    if c in _VOWELS or c in "wxy":
        return False
    if b not in _VOWELS or a in _VOWELS:
        return False
    return len(re.findall(r"[aeiouy]+", lemma)) == 1


def _rule_third_singular(lemma: str) -> str:
    if lemma.endswith(("s", "x", "z", "ch", "sh")):
        return lemma + "es"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ies"
    return lemma + "s"


def _rule_gerund(lemma: str) -> str:
    if lemma.endswith("ie"):
        return lemma[:-2] + "ying"
    if lemma.endswith("e") and len(lemma) > 2 and not lemma.endswith(("ee", "oe", "ye")):
        return lemma[:-1] + "ing"
    if _doubles_final_consonant(lemma):
        return lemma + lemma[-1] + "ing"
    return lemma + "ing"


def _rule_past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ied"
    if _doubles_final_consonant(lemma):
        return lemma + lemma[-1] + "ed"
    return lemma + "ed"


def verb_forms(lemma: str) -> VerbParadigm:
    """Return the full paradigm for a lowercase verb lemma.

    Raises ValueError for an empty or non-alphabetic lemma (internal
    hyphens are allowed).
    """
    if not lemma:
        raise ValueError("empty verb lemma")
    if not _LEMMA_RE.match(lemma):
        raise ValueError(f"not a lowercase verb lemma: {lemma!r}")
    overrides = _irregular_table().get(lemma, {})
    past = overrides.get("past", _rule_past(lemma))
    return VerbParadigm(
        lemma=lemma,
        base=lemma,
        third_singular=overrides.get("third_singular", _rule_third_singular(lemma)),
        gerund=overrides.get("gerund", _rule_gerund(lemma)),
        past=past,
        past_participle=overrides.get("past_participle", past),
    )


def inflect(lemma: str, feature: str) -> str:
    """Select one paradigm slot for a lemma."""
    if feature not in FEATURES:
        raise ValueError(f"unknown paradigm feature: {feature!r}")
    return getattr(verb_forms(lemma), feature)


def mwe_variants(mwe: str) -> list[MweVariant]:
    """All surface variants of an MWE, one per distinct head-verb form.

    The head verb is the first whitespace-separated token; the remaining
    tokens are preserved verbatim.
    """
    tokens = mwe.split()
    if len(tokens) < 2:
        raise ValueError(f"an MWE needs at least 2 tokens: {mwe!r}")
    head, tail = tokens[0], tuple(tokens[1:])
    return [MweVariant(tokens=(form, *tail)) for form in verb_forms(head).distinct_forms()]
