"""End-to-end learning runs: orchestration, sense cloning, ledger, review.

A run takes one seed verb sense through template construction, GMR
sampling, sentence realization, the prompt chain (with either the LLM
path or the corpus path supplying candidate sentences), validation, and
finally sense cloning. Everything observable about the run lands in a
JSON ledger whose digest is stable across reruns with the same config
and a replay backend. The input lexicon is never modified; learned
senses go to an output copy next to the ledger.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from . import corpus as corpus_search
from .errors import ConfigError, LexiforgeError, ResourceError
from .filtering import filter_candidates, parse_mwe_list
from .gmr import build_template, eligible_fillers, instantiate
from .lexicon import (
    ExtraLexItem,
    LexSense,
    Lexicon,
    SemStruc,
    SynStruc,
    load_lexicon,
    save_lexicon,
    sense_to_record,
)
from .nlg import realize_all
from .ontology import load_ontology
from .prompts import (
    ChainContext,
    HttpBackend,
    LlmBackend,
    ModelParams,
    load_templates,
    replay_record,
    run_step,
)
from .validation import CandidateMwe, build_validation_bindings, decide, parse_validated

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openai.com/v1/chat/completions"
LEDGER_FILENAME = "ledger.json"
LEARNED_LEXICON_FILENAME = "lexicon.learned.json"
VETTED_LEXICON_FILENAME = "lexicon.vetted.json"


@dataclass
class RunConfig:
    seed_sense_id: str
    path: str  # "llm" | "corpus"
    lexicon_path: Path
    ontology_path: Path
    out_dir: Path
    corpus_path: Path | None = None
    backend: str = "replay"  # "http" | "replay"
    replay_file: Path | None = None
    base_url: str | None = None
    gmr_cap: int = 5
    rng_seed: int = 0
    gap: int = corpus_search.DEFAULT_GAP
    hit_limit: int = corpus_search.DEFAULT_LIMIT
    model: ModelParams = field(default_factory=ModelParams)
    templates_path: Path | None = None
    corpus_cache: Path | None = None
    include_learned: bool = False
    use_descendants: bool = False
    seed_example_cap: int = 3
    learned_example_cap: int = 5

    def validate(self) -> None:
        if self.path not in ("llm", "corpus"):
            raise ConfigError(f"path must be 'llm' or 'corpus', got {self.path!r}")
        if self.backend not in ("http", "replay"):
            raise ConfigError(f"backend must be 'http' or 'replay', got {self.backend!r}")
        if self.path == "corpus" and self.corpus_path is None:
            raise ConfigError("--path corpus requires a corpus file")
        if self.backend == "replay" and self.replay_file is None:
            raise ConfigError("--backend replay requires a replay transcript")
        if self.gmr_cap < 1:
            raise ConfigError(f"gmr cap must be >= 1, got {self.gmr_cap}")
        if self.gap < 0:
            raise ConfigError(f"gap must be >= 0, got {self.gap}")
        if self.hit_limit < 1:
            raise ConfigError(f"hit limit must be >= 1, got {self.hit_limit}")

    def snapshot(self) -> dict:
        return {
            "seed_sense_id": self.seed_sense_id,
            "path": self.path,
            "lexicon_path": str(self.lexicon_path),
            "ontology_path": str(self.ontology_path),
            "out_dir": str(self.out_dir),
            "corpus_path": None if self.corpus_path is None else str(self.corpus_path),
            "backend": self.backend,
            "replay_file": None if self.replay_file is None else str(self.replay_file),
            "base_url": self.base_url,
            "gmr_cap": self.gmr_cap,
            "rng_seed": self.rng_seed,
            "gap": self.gap,
            "hit_limit": self.hit_limit,
            "model": self.model.as_dict(),
            "templates_path": None if self.templates_path is None else str(self.templates_path),
            "include_learned": self.include_learned,
            "use_descendants": self.use_descendants,
            "seed_example_cap": self.seed_example_cap,
            "learned_example_cap": self.learned_example_cap,
        }


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def ledger_digest(run: dict) -> str:
    return hashlib.sha256(canonical_json({**run, "timestamps": None})).hexdigest()


def run_id_for(config: RunConfig) -> str:
    return "run-" + hashlib.sha256(canonical_json(config.snapshot())).hexdigest()[:12]


@dataclass
class RunLedger:
    run: dict
    digest: str
    review_decisions: list = field(default_factory=list)

    def to_json(self) -> str:
        payload = {"run": self.run, "digest": self.digest, "review_decisions": self.review_decisions}
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), "utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunLedger":
        path = Path(path)
        try:
            payload = json.loads(path.read_text("utf-8"))
        except OSError as exc:
            raise ResourceError(f"cannot read ledger {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ResourceError(f"{path}: invalid ledger JSON: {exc.msg}") from exc
        return cls(
            run=payload["run"],
            digest=payload["digest"],
            review_decisions=payload.get("review_decisions", []),
        )


def clone_sense(
    seed: LexSense,
    mwe: str,
    validated: list[str],
    run_id: str,
    *,
    sense_index: int = 1,
    example_cap: int = 5,
) -> LexSense:
    """Clone the seed sense for an MWE: same meaning, new surface frame.

    The MWE's head verb replaces the seed head; every following token
    becomes a required syn-struc element carrying no meaning of its own
    (null_sem). Validated sentences fill the example zone.
    """
    tokens = mwe.split()
    if len(tokens) < 2:
        raise ValueError(f"an MWE sense needs at least 2 tokens: {mwe!r}")
    if not validated:
        raise ValueError(f"cannot clone {mwe!r} without validated sentences")
    return LexSense(
        sense_id=f"{mwe.replace(' ', '_')}-v{sense_index}",
        lemma=mwe,
        pos="verb",
        syn_struc=SynStruc(
            head=tokens[0],
            subject_var=seed.syn_struc.subject_var,
            object_var=seed.syn_struc.object_var,
            extras=[ExtraLexItem(surface=t, null_sem=True) for t in tokens[1:]],
        ),
        sem_struc=SemStruc(
            concept=seed.sem_struc.concept,
            role_bindings=dict(seed.sem_struc.role_bindings),
        ),
        examples=validated[:example_cap],
        learned=True,
        provenance=run_id,
    )


def _make_backend(config: RunConfig) -> LlmBackend:
    if config.backend == "replay":
        assert config.replay_file is not None
        return replay_record(config.replay_file)
    return HttpBackend(base_url=config.base_url or DEFAULT_BASE_URL)


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _turns_as_records(ctx: ChainContext) -> list[dict]:
    return [{"prompt": t.prompt, "response": t.response} for t in ctx.turns]


def learn(config: RunConfig, backend: LlmBackend | None = None) -> RunLedger:
    """Run the whole learning process for one seed sense.

    Writes the ledger and the learned-lexicon copy into config.out_dir
    and returns the ledger. Resource problems abort; a failure confined
    to one MWE is recorded on that candidate and the run continues.
    """
    config.validate()
    run_id = run_id_for(config)
    started = _utc_now()

    lexicon = load_lexicon(config.lexicon_path)
    ontology = load_ontology(config.ontology_path)
    templates = load_templates(config.templates_path)
    index = None
    if config.path == "corpus":
        assert config.corpus_path is not None
        index = corpus_search.build_index(config.corpus_path, config.corpus_cache)

    seed = lexicon.senses.get(config.seed_sense_id)
    if seed is None:
        raise ConfigError(f"seed sense {config.seed_sense_id!r} not in lexicon")
    if not seed.is_transitive_verb():
        raise ConfigError(f"seed sense {config.seed_sense_id!r} is not a transitive verb sense")

    diagnostics: list[str] = []
    errors: list[dict] = []

    template = build_template(seed, ontology)
    census = eligible_fillers(
        template,
        lexicon,
        include_learned=config.include_learned,
        ontology=ontology,
        use_descendants=config.use_descendants,
    )
    for role, ids in census.items():
        if not ids:
            diagnostics.append(
                f"role {role} (constraint {template.role_constraints[role]}) has no eligible fillers"
            )
    gmrs = instantiate(
        template,
        lexicon,
        config.gmr_cap,
        config.rng_seed,
        include_learned=config.include_learned,
        ontology=ontology,
        use_descendants=config.use_descendants,
    )
    seed_sentences = realize_all(gmrs, lexicon)

    run: dict = {
        "run_id": run_id,
        "config": config.snapshot(),
        "templates": {tid: t.body for tid, t in templates.items()},
        "seed_sense_id": seed.sense_id,
        "template": {
            "concept": template.concept,
            "role_constraints": dict(template.role_constraints),
        },
        "filler_census": census,
        "gmrs": [{"verb_sense": g.verb_sense, "fillers": dict(g.fillers)} for g in gmrs],
        "seed_sentences": seed_sentences,
        "mwe_list": [],
        "candidates": [],
        "learned_sense_ids": [],
        "learned_senses": [],
        "diagnostics": diagnostics,
        "errors": errors,
        "shared_transcript": [],
        "outputs": {"lexicon": LEARNED_LEXICON_FILENAME},
        "timestamps": {"started": started, "finished": None},
    }

    candidates: list[CandidateMwe] = []
    transcripts: dict[str, list[dict]] = {}
    if not seed_sentences:
        diagnostics.append("no GMRs could be instantiated; chain not started")
    else:
        llm = backend if backend is not None else _make_backend(config)
        try:
            ctx = ChainContext()
            _, ctx = run_step(llm, ctx, templates["base"], {}, config.model)
            mwe_response, ctx = run_step(
                llm,
                ctx,
                templates["mwe_generation"],
                {"seed": seed.lemma, "text": " ".join(seed_sentences)},
                config.model,
            )
            run["shared_transcript"] = _turns_as_records(ctx)
            run["mwe_list"] = parse_mwe_list(mwe_response)
        except LexiforgeError as exc:
            errors.append({"stage": "mwe_generation", "error": str(exc)})
            run["timestamps"]["finished"] = _utc_now()
            _finalize(config, run, lexicon, seed, [], run_id)
            raise

        for mwe in run["mwe_list"]:
            candidate, turns = _process_mwe(
                llm, ctx, templates, config, seed, seed_sentences, mwe, index
            )
            candidates.append(candidate)
            transcripts[mwe] = turns

    run["candidates"] = [
        {
            "mwe": c.mwe,
            "source_path": c.source_path,
            "candidate_sentences": c.candidate_sentences,
            "validated_sentences": c.validated_sentences,
            "verdict": c.verdict,
            "reason": c.reason,
            "transcript": transcripts.get(c.mwe, []),
        }
        for c in candidates
    ]

    accepted = [c for c in candidates if c.verdict == "accepted"]
    ledger = _finalize(config, run, lexicon, seed, accepted, run_id)
    return ledger


def _process_mwe(
    llm: LlmBackend,
    shared_ctx: ChainContext,
    templates: dict,
    config: RunConfig,
    seed: LexSense,
    seed_sentences: list[str],
    mwe: str,
    index,
) -> tuple[CandidateMwe, list[dict]]:
    """One MWE's branch of the chain; failures stay inside the branch."""
    ctx = shared_ctx
    candidate = CandidateMwe(mwe=mwe, source_path=config.path)
    try:
        if config.path == "llm":
            raw, ctx = run_step(
                llm,
                ctx,
                templates["sentence_generation"],
                {"mwe": mwe, "seed": seed.lemma, "text": " ".join(seed_sentences)},
                config.model,
            )
            sentences = filter_candidates(raw, mwe, gap=config.gap)
        else:
            hits = corpus_search.find_sentences(index, mwe, gap=config.gap, limit=config.hit_limit)
            sentences = [h.raw_text for h in hits]
        candidate = replace(candidate, candidate_sentences=sentences)
        if not sentences:
            candidate = replace(
                candidate,
                verdict="rejected",
                reason=f"no candidate sentences from {config.path} path",
            )
            return candidate, _turns_as_records(ctx)

        raw, ctx = run_step(
            llm,
            ctx,
            templates["validation"],
            build_validation_bindings(seed.lemma, seed_sentences, mwe, sentences),
            config.model,
        )
        candidate = replace(candidate, validated_sentences=parse_validated(raw, sentences))
        candidate = decide(candidate)
    except LexiforgeError as exc:
        logger.warning("MWE %r failed: %s", mwe, exc)
        candidate = replace(candidate, verdict="rejected", reason=f"stage failure: {exc}")
    return candidate, _turns_as_records(ctx)


def _finalize(
    config: RunConfig,
    run: dict,
    lexicon: Lexicon,
    seed: LexSense,
    accepted: list[CandidateMwe],
    run_id: str,
) -> RunLedger:
    """Clone accepted MWEs into an output lexicon and write run outputs."""
    out_lexicon = lexicon.copy()
    for candidate in accepted:
        sense_id = out_lexicon.next_sense_id(candidate.mwe)
        index = int(sense_id.rsplit("-v", 1)[1])
        sense = clone_sense(
            seed,
            candidate.mwe,
            candidate.validated_sentences,
            run_id,
            sense_index=index,
            example_cap=config.learned_example_cap,
        )
        out_lexicon.add_sense(sense)
        run["learned_sense_ids"].append(sense.sense_id)

    run["learned_senses"] = [
        sense_to_record(out_lexicon[sid]) for sid in run["learned_sense_ids"]
    ]

    # the seed entry keeps a sample of its own generated sentences
    out_seed = out_lexicon[seed.sense_id]
    for sentence in run["seed_sentences"][: config.seed_example_cap]:
        if sentence not in out_seed.examples:
            out_seed.examples.append(sentence)

    if run["timestamps"]["finished"] is None:
        run["timestamps"]["finished"] = _utc_now()
    ledger = RunLedger(run=run, digest=ledger_digest(run))

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_lexicon(out_lexicon, out_dir / LEARNED_LEXICON_FILENAME)
    ledger.save(out_dir / LEDGER_FILENAME)
    logger.info(
        "run %s: %d MWE(s) proposed, %d accepted, ledger %s",
        run_id,
        len(run["mwe_list"]),
        len(run["learned_sense_ids"]),
        out_dir / LEDGER_FILENAME,
    )
    return ledger


# --- review ----------------------------------------------------------------

def format_report(ledger: RunLedger) -> str:
    run = ledger.run
    lines = [
        f"run {run['run_id']}  seed {run['seed_sense_id']}  "
        f"path {run['config']['path']}  backend {run['config']['backend']}",
        f"seed sentences: {len(run['seed_sentences'])}",
    ]
    for sentence in run["seed_sentences"]:
        lines.append(f"    {sentence}")
    lines.append(f"MWEs proposed: {', '.join(run['mwe_list']) or '(none)'}")
    for cand in run["candidates"]:
        status = cand["verdict"]
        if cand["reason"] and status == "rejected":
            status += f" ({cand['reason']})"
        lines.append(f"  - {cand['mwe']}: {status}")
        for sentence in cand["validated_sentences"]:
            lines.append(f"      validated: {sentence}")
    lines.append("learned senses:")
    if run["learned_senses"]:
        for record in run["learned_senses"]:
            lines.append(
                f"  {record['sense_id']}  lemma {record['lemma']!r}  "
                f"concept {record['sem_struc']['concept']}  "
                f"examples {len(record['examples'])}"
            )
    else:
        lines.append("  (none)")
    for note in run["diagnostics"]:
        lines.append(f"note: {note}")
    for err in run["errors"]:
        lines.append(f"error [{err['stage']}]: {err['error']}")
    if ledger.review_decisions:
        lines.append("review decisions:")
        for decision in ledger.review_decisions:
            lines.append(f"  {decision['action']} {decision['sense_id']} at {decision['at']}")
    return "\n".join(lines)


def review(
    ledger_path: str | Path,
    accept: str | None = None,
    reject: str | None = None,
    out: str | Path | None = None,
) -> str:
    """Inspect a run ledger; optionally vet or drop one learned sense.

    --accept clears the learned flag into a vetted lexicon copy;
    --reject removes the sense from it. Decisions are appended to the
    ledger. With no action this is read-only.
    """
    ledger_path = Path(ledger_path)
    ledger = RunLedger.load(ledger_path)
    if accept and reject:
        raise ConfigError("choose either --accept or --reject, not both")

    report = format_report(ledger)
    action, sense_id = ("accept", accept) if accept else ("reject", reject)
    if sense_id is None:
        return report

    learned_path = ledger_path.parent / ledger.run["outputs"]["lexicon"]
    lexicon = load_lexicon(learned_path)
    if sense_id not in lexicon:
        raise ConfigError(f"sense {sense_id!r} not present in {learned_path}")
    if action == "accept":
        lexicon[sense_id].learned = False
        vetted = lexicon
    else:
        vetted = Lexicon(s for s in lexicon if s.sense_id != sense_id)
    out_path = Path(out) if out is not None else ledger_path.parent / VETTED_LEXICON_FILENAME
    save_lexicon(vetted, out_path)

    ledger.review_decisions.append({"action": action, "sense_id": sense_id, "at": _utc_now()})
    ledger.save(ledger_path)
    return report + f"\n{action}ed {sense_id} -> {out_path}"
