"""Command-line interface.

Subcommands:
  learn    run the learner for one seed sense (llm or corpus path)
  record   run against the HTTP backend while writing a replay transcript
  review   inspect a run ledger; vet or drop learned senses

Exit codes: 0 success, 1 resource error (files, backend), 2 config error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import BackendError, LexiforgeError, ResourceError
from .pipeline import DEFAULT_BASE_URL, RunConfig, learn, review
from .prompts import HttpBackend, ModelParams, RecordingBackend

logger = logging.getLogger(__name__)


def _add_run_arguments(parser: argparse.ArgumentParser, with_backend: bool) -> None:
    parser.add_argument("--seed", required=True, help="seed sense id, e.g. employ-v3")
    parser.add_argument("--path", required=True, choices=["llm", "corpus", "both"])
    if with_backend:
        parser.add_argument("--backend", required=True, choices=["http", "replay"])
        parser.add_argument("--replay-file", type=Path, help="transcript for --backend replay")
    parser.add_argument("--lexicon", required=True, type=Path)
    parser.add_argument("--ontology", required=True, type=Path)
    parser.add_argument("--corpus", type=Path, help="sentence-per-line corpus (corpus path)")
    parser.add_argument("--corpus-cache", type=Path, help="optional binary index cache")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--gmr-cap", type=int, default=5)
    parser.add_argument("--rng-seed", type=int, default=0)
    parser.add_argument("--gap", type=int, default=4, help="max tokens between MWE components")
    parser.add_argument("--limit", type=int, default=10, help="max corpus hits per MWE")
    parser.add_argument("--templates", type=Path, help="prompt template config JSON")
    parser.add_argument("--model", default="gpt-3.5-turbo")
    parser.add_argument("--temperature", type=float, default=0.0)
    parser.add_argument("--max-tokens", type=int, default=512)
    parser.add_argument("--base-url", help="chat-completions endpoint for the http backend")
    parser.add_argument("--include-learned", action="store_true",
                        help="let earlier learned senses serve as GMR fillers")
    parser.add_argument("--use-descendants", action="store_true",
                        help="accept fillers whose concepts descend from the constraints")


def _config_from_args(args: argparse.Namespace, path: str, out_dir: Path, backend: str) -> RunConfig:
    return RunConfig(
        seed_sense_id=args.seed,
        path=path,
        lexicon_path=args.lexicon,
        ontology_path=args.ontology,
        out_dir=out_dir,
        corpus_path=args.corpus,
        backend=backend,
        replay_file=getattr(args, "replay_file", None),
        base_url=args.base_url,
        gmr_cap=args.gmr_cap,
        rng_seed=args.rng_seed,
        gap=args.gap,
        hit_limit=args.limit,
        model=ModelParams(
            model_name=args.model, temperature=args.temperature, max_tokens=args.max_tokens
        ),
        templates_path=args.templates,
        corpus_cache=args.corpus_cache,
        include_learned=args.include_learned,
        use_descendants=args.use_descendants,
    )


def _run_paths(args: argparse.Namespace) -> list[tuple[str, Path]]:
    # --path both runs two independent ledgers, never mixing candidates
    if args.path == "both":
        return [("llm", Path(args.out) / "llm"), ("corpus", Path(args.out) / "corpus")]
    return [(args.path, Path(args.out))]


def _cmd_learn(args: argparse.Namespace) -> int:
    for path, out_dir in _run_paths(args):
        config = _config_from_args(args, path, out_dir, args.backend)
        ledger = learn(config)
        print(f"[{path}] run {ledger.run['run_id']}: "
              f"{len(ledger.run['learned_sense_ids'])} sense(s) learned "
              f"-> {out_dir / 'ledger.json'}")
        for sid in ledger.run["learned_sense_ids"]:
            print(f"  learned {sid}")
    return 0


def _cmd_record(args: argparse.Namespace) -> int:
    for path, out_dir in _run_paths(args):
        config = _config_from_args(args, path, out_dir, backend="http")
        recorder = RecordingBackend(HttpBackend(base_url=args.base_url or DEFAULT_BASE_URL))
        try:
            ledger = learn(config, backend=recorder)
        finally:
            if recorder.entries:
                out_dir.mkdir(parents=True, exist_ok=True)
                transcript = args.transcript or out_dir / "transcript.json"
                recorder.save(transcript)
                print(f"[{path}] transcript with {len(recorder.entries)} exchange(s) "
                      f"-> {transcript}")
        print(f"[{path}] run {ledger.run['run_id']}: "
              f"{len(ledger.run['learned_sense_ids'])} sense(s) learned")
    return 0


def _cmd_review(args: argparse.Namespace) -> int:
    print(review(args.ledger, accept=args.accept, reject=args.reject, out=args.out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexiforge",
        description="Learn synonymous multiword expressions for lexicon verb senses.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="run the learner for one seed sense")
    _add_run_arguments(p_learn, with_backend=True)
    p_learn.set_defaults(func=_cmd_learn)

    p_record = sub.add_parser("record", help="learn via HTTP while recording a transcript")
    _add_run_arguments(p_record, with_backend=False)
    p_record.add_argument("--transcript", type=Path, help="where to write the replay transcript")
    p_record.set_defaults(func=_cmd_record)

    p_review = sub.add_parser("review", help="inspect a ledger; vet learned senses")
    p_review.add_argument("ledger", type=Path)
    group = p_review.add_mutually_exclusive_group()
    group.add_argument("--accept", metavar="ID", help="clear the learned flag on this sense")
    group.add_argument("--reject", metavar="ID", help="drop this sense from the vetted lexicon")
    p_review.add_argument("--out", type=Path, help="vetted lexicon output file")
    p_review.set_defaults(func=_cmd_review)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ResourceError, BackendError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LexiforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
