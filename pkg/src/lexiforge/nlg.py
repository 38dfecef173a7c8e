"""Template realization of GMRs as plain English seed sentences.

The frame is fixed: indefinite article + subject lemma + past-tense verb
+ indefinite article + object lemma + period. That is deliberately plain;
the sentences exist to convey one verb sense to a language model, not to
read well.
"""

from __future__ import annotations

from .errors import LexiforgeError
from .gmr import Gmr
from .lexicon import Lexicon
from .morphology import inflect

_VOWELS = "aeiou"


def choose_article(noun_phrase: str) -> str:
    """Pick "a"/"an" by first letter. Purely orthographic: "hour" gets "a"."""
    if not noun_phrase:
        raise ValueError("empty noun phrase")
    return "an" if noun_phrase[0].lower() in _VOWELS else "a"


def realize(gmr: Gmr, lexicon: Lexicon) -> str:
    """Render one GMR as a sentence, e.g. "A leader employed a human."."""
    verb = lexicon[gmr.verb_sense]
    try:
        subject = lexicon[gmr.fillers["AGENT"]].lemma
        obj = lexicon[gmr.fillers["THEME"]].lemma
    except KeyError as exc:
        raise LexiforgeError(f"GMR for {gmr.verb_sense} lacks a resolvable filler: {exc}") from exc
    verb_form = inflect(verb.syn_struc.head, "past")
    return (
        f"{choose_article(subject).capitalize()} {subject} {verb_form} "
        f"{choose_article(obj)} {obj}."
    )


def realize_all(gmrs: list[Gmr], lexicon: Lexicon) -> list[str]:
    """Realize every GMR in order, dropping duplicate sentences."""
    seen: list[str] = []
    for gmr in gmrs:
        sentence = realize(gmr, lexicon)
        if sentence not in seen:
            seen.append(sentence)
    return seen
