"""Regenerate the bundled replay transcripts and run settings.

Each transcript pairs the exact prompts the learner composes over the
fixture lexicon/ontology with canned LLM responses, so the three demo
runs (seeds measure-v1, guess-v1, employ-v3) replay offline and land on
the same results every time. Rerun this after changing the fixture data
or the prompt templates:

    python3 fixtures/build_transcripts.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from lexiforge.gmr import build_template, instantiate
from lexiforge.lexicon import load_lexicon
from lexiforge.nlg import realize_all
from lexiforge.ontology import load_ontology
from lexiforge.pipeline import RunConfig, learn
from lexiforge.prompts import RecordingBackend

ROOT = Path(__file__).resolve().parent

# canned responses per run; markers are matched against the newly
# rendered tail of each composed prompt
CANNED = {
    "measure": {
        "mwe_list": "[take stock]",
        "sentences": {
            "take stock": (
                "I apologize for the confusion. Here are several example sentences "
                "illustrating the use of the phrasal verb ‘take stock’: "
                "|| Let’s take stock of our inventory before placing the order. "
                "|| After a long day at work, I like to take stock of my accomplishments||"
            ),
        },
        "validations": {
            "take stock": (
                "Let’s take stock of our inventory before placing the order. || "
                "After a long day at work, I like to take stock of my accomplishments"
            ),
        },
    },
    "guess": {
        "mwe_list": "MWEs: [figure out, take a shot, take a stab, work out]",
        "sentences": {
            "figure out": (
                "|| The scientists worked for months to figure out the cause of the anomaly. "
                "|| She finally figured out the answer to the riddle. ||"
            ),
            "take a shot": (
                "|| The detective took a shot at who might be the main suspect based on the "
                "available clues. || She took a shot at persuading her parents to let her go "
                "on the trip with her friends. || Despite having no experience in cooking, he "
                "took a shot at preparing a gourmet meal for his guests. ||"
            ),
            "take a stab": (
                "|| He took a stab at guessing her age. "
                "|| I will take a stab at solving the crossword puzzle. ||"
            ),
            "work out": (
                "I can help with that. Here are example sentences: "
                "|| They met to work out the details of the contract. "
                "|| I work out at the gym every morning. ||"
            ),
        },
        "validations": {
            "figure out": "She finally figured out the answer to the riddle.",
            "take a shot": (
                "The detective took a shot at who might be the main suspect based on the "
                "available clues."
            ),
            "take a stab": "He took a stab at guessing her age.",
            "work out": "None of the candidate sentences use the expression in that sense.",
        },
    },
    "employ": {
        "mwe_list": "MWEs: [bring in, hire on, take on]",
        "sentences": {},
        "validations": {
            "bring in": "Bring in an expert.",
        },
    },
}

RUNS = {
    "measure": {
        "seed_sense_id": "measure-v1",
        "path": "llm",
        "seed_sentence": "An actor measured a matter.",
        "transcript": "transcripts/measure_llm.json",
    },
    "guess": {
        "seed_sense_id": "guess-v1",
        "path": "llm",
        "seed_sentence": "A human being guessed a factor.",
        "transcript": "transcripts/guess_llm.json",
    },
    "employ": {
        "seed_sense_id": "employ-v3",
        "path": "corpus",
        "seed_sentence": "A leader employed a human.",
        "transcript": "transcripts/employ_corpus.json",
    },
}


class ScriptedBackend:
    """Answers by matching the freshly rendered part of each prompt."""

    def __init__(self, canned: dict):
        self.canned = canned

    def complete(self, prompt: str, params) -> str:
        tail = prompt.rsplit("\n\nPROMPT: ", 1)[-1]
        for mwe, response in self.canned["sentences"].items():
            if f'Write several short example sentences that use "{mwe}"' in tail:
                return response
        for mwe, response in self.canned["validations"].items():
            if f'Which of the CANDIDATES use "{mwe}"' in tail:
                return response
        if "List multiword expressions" in tail:
            return self.canned["mwe_list"]
        if "lexicographer's assistant" in tail:
            return "Understood."
        raise SystemExit(f"no scripted response for prompt tail: {tail[:100]!r}")


def find_rng_seed(lexicon, ontology, seed_sense_id: str, target_sentence: str) -> int:
    """Smallest rng seed whose single-GMR sample realizes the target sentence."""
    template = build_template(lexicon[seed_sense_id], ontology)
    for rng_seed in range(5000):
        gmrs = instantiate(template, lexicon, 1, rng_seed)
        if realize_all(gmrs, lexicon) == [target_sentence]:
            return rng_seed
    raise SystemExit(f"no rng seed realizes {target_sentence!r} for {seed_sense_id}")


def main() -> int:
    lexicon = load_lexicon(ROOT / "lexicon.json")
    ontology = load_ontology(ROOT / "ontology.json")
    (ROOT / "transcripts").mkdir(exist_ok=True)

    settings = {}
    for name, run in RUNS.items():
        rng_seed = find_rng_seed(lexicon, ontology, run["seed_sense_id"], run["seed_sentence"])
        recorder = RecordingBackend(ScriptedBackend(CANNED[name]))
        with tempfile.TemporaryDirectory() as tmp:
            config = RunConfig(
                seed_sense_id=run["seed_sense_id"],
                path=run["path"],
                lexicon_path=ROOT / "lexicon.json",
                ontology_path=ROOT / "ontology.json",
                corpus_path=ROOT / "corpus.txt" if run["path"] == "corpus" else None,
                out_dir=Path(tmp),
                backend="http",
                base_url="http://scripted.invalid",
                gmr_cap=1,
                rng_seed=rng_seed,
            )
            ledger = learn(config, backend=recorder)
        recorder.save(ROOT / run["transcript"])
        accepted = [
            c["mwe"] for c in ledger.run["candidates"] if c["verdict"] == "accepted"
        ]
        print(
            f"{name}: rng_seed={rng_seed}, {len(recorder.entries)} exchanges, "
            f"accepted {accepted} -> {run['transcript']}"
        )
        settings[name] = {
            "seed_sense_id": run["seed_sense_id"],
            "path": run["path"],
            "gmr_cap": 1,
            "rng_seed": rng_seed,
            "seed_sentence": run["seed_sentence"],
            "transcript": run["transcript"],
        }

    (ROOT / "replay_runs.json").write_text(
        json.dumps(settings, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    print(f"run settings -> {ROOT / 'replay_runs.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
