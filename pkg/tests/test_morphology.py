from pathlib import Path

import pytest

from lexiforge.morphology import FEATURES, inflect, mwe_variants, verb_forms

GOLD = Path(__file__).parent / "data" / "verb_paradigms_gold.tsv"


def gold_rows():
    rows = []
    for line in GOLD.read_text("utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        lemma, third, gerund, past, pp = line.split("\t")
        rows.append((lemma, third, gerund, past, pp))
    return rows


def test_look_paradigm():
    p = verb_forms("look")
    assert p.as_dict() == {
        "base": "look",
        "third_singular": "looks",
        "gerund": "looking",
        "past": "looked",
        "past_participle": "looked",
    }


def test_run_is_irregular():
    p = verb_forms("run")
    assert (p.base, p.third_singular, p.gerund, p.past, p.past_participle) == (
        "run", "runs", "running", "ran", "run",
    )


def test_guess_takes_es():
    # sibilant endings (s/x/z/ch/sh) take -es
    p = verb_forms("guess")
    assert p.third_singular == "guesses"
    assert p.past == "guessed"
    assert p.gerund == "guessing"


def test_gold_suite_has_200_verbs_and_zero_mismatches():
    rows = gold_rows()
    assert len(rows) == 200
    mismatches = []
    for lemma, third, gerund, past, pp in rows:
        p = verb_forms(lemma)
        got = (p.third_singular, p.gerund, p.past, p.past_participle)
        if got != (third, gerund, past, pp):
            mismatches.append((lemma, got, (third, gerund, past, pp)))
    assert mismatches == []


def test_base_form_always_present():
    for lemma, *_ in gold_rows():
        p = verb_forms(lemma)
        assert p.base == lemma
        forms = p.distinct_forms()
        assert lemma in forms
        assert 1 <= len(forms) <= 5


def test_mwe_variants_look_up():
    assert [v.text for v in mwe_variants("look up")] == [
        "look up", "looks up", "looking up", "looked up",
    ]


def test_mwe_variants_take_a_shot():
    texts = [v.text for v in mwe_variants("take a shot")]
    assert texts == [
        "take a shot", "takes a shot", "taking a shot", "took a shot", "taken a shot",
    ]


def test_mwe_variants_bring_in():
    texts = [v.text for v in mwe_variants("bring in")]
    assert "brings in" in texts and "bringing in" in texts and "brought in" in texts


def test_variant_count_matches_distinct_forms():
    for mwe in ("look up", "take a shot", "bring in", "run off", "figure out"):
        head = mwe.split()[0]
        assert len(mwe_variants(mwe)) == len(verb_forms(head).distinct_forms())


def test_non_head_tokens_preserved():
    for variant in mwe_variants("take a shot"):
        assert variant.tokens[1:] == ("a", "shot")


def test_inflect():
    assert inflect("employ", "past") == "employed"
    assert inflect("measure", "past") == "measured"
    assert inflect("be", "past") == "was"


def test_inflect_unknown_feature():
    with pytest.raises(ValueError):
        inflect("walk", "pluperfect")


def test_empty_lemma_rejected():
    with pytest.raises(ValueError):
        verb_forms("")


def test_non_lowercase_lemma_rejected():
    with pytest.raises(ValueError):
        verb_forms("Look")


def test_hyphenated_lemma_allowed():
    assert verb_forms("dry-clean").past == "dry-cleaned"


def test_single_token_mwe_rejected():
    with pytest.raises(ValueError):
        mwe_variants("recall")


def test_features_tuple_is_api():
    assert FEATURES == ("base", "third_singular", "gerund", "past", "past_participle")
