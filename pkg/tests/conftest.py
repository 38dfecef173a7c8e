import json
from pathlib import Path

import pytest

from lexiforge import load_lexicon, load_ontology
from lexiforge.pipeline import RunConfig

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
TEST_DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def lexicon():
    # function-scoped: several tests mutate their copy
    return load_lexicon(FIXTURES / "lexicon.json")


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(FIXTURES / "ontology.json")


@pytest.fixture(scope="session")
def replay_runs() -> dict:
    return json.loads((FIXTURES / "replay_runs.json").read_text("utf-8"))


@pytest.fixture()
def run_config_factory(replay_runs, tmp_path):
    """Build a RunConfig for one of the bundled replay runs."""

    def make(name: str, out_name: str = "out", **overrides) -> RunConfig:
        settings = replay_runs[name]
        kwargs = dict(
            seed_sense_id=settings["seed_sense_id"],
            path=settings["path"],
            lexicon_path=FIXTURES / "lexicon.json",
            ontology_path=FIXTURES / "ontology.json",
            corpus_path=FIXTURES / "corpus.txt" if settings["path"] == "corpus" else None,
            out_dir=tmp_path / out_name,
            backend="replay",
            replay_file=FIXTURES / settings["transcript"],
            gmr_cap=settings["gmr_cap"],
            rng_seed=settings["rng_seed"],
        )
        kwargs.update(overrides)
        return RunConfig(**kwargs)

    return make
