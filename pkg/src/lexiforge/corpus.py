"""Sentence-per-line corpus indexing and discontinuous MWE search.

The index stores lowercased, punctuation-free tokens with positions.
A search for an MWE matches any inflected variant of its head verb
followed by the remaining components in order, allowing up to `gap`
intervening tokens between consecutive components ("run, suddenly, off"
still matches "run off"). The index is immutable once built; queries
are safe from any thread.
"""

from __future__ import annotations

import hashlib
import logging
import pickle
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusError
from .morphology import mwe_variants

logger = logging.getLogger(__name__)

DEFAULT_GAP = 4
DEFAULT_LIMIT = 10
MAX_LINE_CHARS = 2000
CACHE_FORMAT_VERSION = 1

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; punctuation is dropped, not kept as tokens."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class SentenceRecord:
    id: int
    raw_text: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class Hit:
    sentence_id: int
    raw_text: str
    match_positions: tuple[int, ...]
    head_form: str


class CorpusIndex:
    def __init__(self, sentences: list[SentenceRecord]):
        self.sentences = sentences
        self.postings: dict[str, list[tuple[int, int]]] = {}
        for record in sentences:
            for position, token in enumerate(record.tokens):
                self.postings.setdefault(token, []).append((record.id, position))

    def __len__(self) -> int:
        return len(self.sentences)


def build_index(corpus_path: str | Path, cache_path: str | Path | None = None) -> CorpusIndex:
    """Index a UTF-8 sentence-per-line file, optionally via a binary cache.

    The cache is keyed by the corpus content digest and a format version;
    on any mismatch it is silently rebuilt.
    """
    corpus_path = Path(corpus_path)
    try:
        raw = corpus_path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {corpus_path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()

    if cache_path is not None:
        cached = _load_cache(Path(cache_path), digest)
        if cached is not None:
            return cached

    sentences: list[SentenceRecord] = []
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), 1):
        text = line.strip()
        if not text:
            continue
        if len(text) > MAX_LINE_CHARS:
            logger.warning("%s line %d exceeds %d chars, skipped", corpus_path, lineno, MAX_LINE_CHARS)
            continue
        sentences.append(
            SentenceRecord(id=len(sentences), raw_text=text, tokens=tuple(tokenize(text)))
        )
    index = CorpusIndex(sentences)

    if cache_path is not None:
        _save_cache(Path(cache_path), digest, index)
    return index


def _load_cache(cache_path: Path, digest: str) -> CorpusIndex | None:
    if not cache_path.exists():
        return None
    try:
        with cache_path.open("rb") as fh:
            payload = pickle.load(fh)
        if payload["version"] != CACHE_FORMAT_VERSION or payload["digest"] != digest:
            return None
        index = CorpusIndex.__new__(CorpusIndex)
        index.sentences = payload["sentences"]
        index.postings = payload["postings"]
        return index
    except Exception:
        logger.warning("unreadable corpus cache %s, rebuilding", cache_path)
        return None


def _save_cache(cache_path: Path, digest: str, index: CorpusIndex) -> None:
    payload = {
        "version": CACHE_FORMAT_VERSION,
        "digest": digest,
        "sentences": index.sentences,
        "postings": index.postings,
    }
    try:
        with cache_path.open("wb") as fh:
            pickle.dump(payload, fh)
    except OSError as exc:
        logger.warning("cannot write corpus cache %s: %s", cache_path, exc)


def match_component_seq(
    tokens: tuple[str, ...] | list[str], components: list[str], start: int, gap: int
) -> tuple[int, ...] | None:
    """Match `components` in order from `start`, each within `gap` tokens.

    tokens[start] must equal components[0]; later components may sit up
    to `gap` tokens after the previous match. Backtracks, so a match is
    found whenever one exists from this start position.
    """
    if tokens[start] != components[0]:
        return None

    def extend(pos: int, idx: int, acc: list[int]) -> tuple[int, ...] | None:
        if idx == len(components):
            return tuple(acc)
        for j in range(pos + 1, min(pos + gap + 2, len(tokens))):
            if tokens[j] == components[idx]:
                result = extend(j, idx + 1, acc + [j])
                if result is not None:
                    return result
        return None

    return extend(start, 1, [start])


def find_in_tokens(
    tokens: tuple[str, ...] | list[str], variants: list[list[str]], gap: int
) -> tuple[tuple[int, ...], str] | None:
    """First match of any variant in one token sequence, or None.

    "First" means earliest start position; variants are tried in
    paradigm order at each position.
    """
    for start in range(len(tokens)):
        for components in variants:
            positions = match_component_seq(tokens, components, start, gap)
            if positions is not None:
                return positions, tokens[start]
    return None


def find_sentences(
    index: CorpusIndex, mwe: str, gap: int = DEFAULT_GAP, limit: int = DEFAULT_LIMIT
) -> list[Hit]:
    """Corpus sentences attesting the MWE, in corpus order, capped at limit.

    The search is seeded by the postings of the head verb's inflected
    forms; only sentences containing some head form are scanned.
    """
    if gap < 0:
        raise ValueError(f"gap must be >= 0, got {gap}")
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    variants = [list(v.tokens) for v in mwe_variants(mwe)]
    candidate_ids = sorted(
        {sid for components in variants for sid, _ in index.postings.get(components[0], [])}
    )
    hits: list[Hit] = []
    for sid in candidate_ids:
        record = index.sentences[sid]
        found = find_in_tokens(record.tokens, variants, gap)
        if found is None:
            continue
        positions, head_form = found
        hits.append(
            Hit(
                sentence_id=sid,
                raw_text=record.raw_text,
                match_positions=positions,
                head_form=head_form,
            )
        )
        if len(hits) == limit:
            break
    return hits
