import random

import pytest

from lexiforge.errors import ResponseFormatError
from lexiforge.filtering import filter_candidates, parse_mwe_list, segment

# a raw response in the shape chat models actually produce: leading
# conversational filler, then '||'-delimited payload, trailing tag
RAW_TAKE_STOCK = (
    "I apologize for the confusion. Here are several example sentences "
    "illustrating the use of the phrasal verb ‘take stock’: "
    "|| Let’s take stock of our inventory before placing the order. "
    "|| After a long day at work, I like to take stock of my accomplishments||"
)


def test_segment_marks_leading_filler():
    segments = segment(RAW_TAKE_STOCK)
    assert len(segments) == 3
    assert segments[0].undelimited is True
    assert segments[0].text.startswith("I apologize")
    assert [s.undelimited for s in segments[1:]] == [False, False]


def test_segment_delimited_only():
    segments = segment("||A.||B.||")
    assert [s.text for s in segments] == ["A.", "B."]
    assert not any(s.undelimited for s in segments)


def test_segment_empty():
    assert segment("") == []


def test_segment_whitespace_before_first_tag():
    segments = segment("   || One. || Two.")
    assert [s.text for s in segments] == ["One.", "Two."]
    assert not any(s.undelimited for s in segments)


def test_segment_output_never_contains_tag():
    rng = random.Random(7)
    alphabet = "ab |"
    for _ in range(200):
        raw = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 30)))
        for seg in segment(raw):
            assert "||" not in seg.text


def test_filter_take_stock_keeps_exactly_the_two_sentences():
    assert filter_candidates(RAW_TAKE_STOCK, "take stock") == [
        "Let’s take stock of our inventory before placing the order.",
        "After a long day at work, I like to take stock of my accomplishments",
    ]


def test_filter_drops_filler_even_when_it_mentions_the_mwe():
    # the filler names the MWE, so delimiting (not containment) must decide
    segments = segment(RAW_TAKE_STOCK)
    assert "take stock" in segments[0].text
    assert segments[0].text not in filter_candidates(RAW_TAKE_STOCK, "take stock")


def test_apology_without_tags_yields_nothing():
    assert filter_candidates("I'm sorry, I cannot help with that.", "take stock") == []


def test_filter_requires_mwe_variant_containment():
    raw = "||Good one with took a shot.||Totally unrelated sentence.||"
    assert filter_candidates(raw, "take a shot") == ["Good one with took a shot."]


def test_filter_containment_check_optional():
    raw = "||Good one with took a shot.||Totally unrelated sentence.||"
    assert filter_candidates(raw, "take a shot", require_mwe=False) == [
        "Good one with took a shot.",
        "Totally unrelated sentence.",
    ]


def test_filter_allows_discontinuous_mwe():
    raw = "||The puppy managed to run, suddenly, off towards the park.||"
    assert filter_candidates(raw, "run off", gap=1) == [
        "The puppy managed to run, suddenly, off towards the park.",
    ]
    assert filter_candidates(raw, "run off", gap=0) == []


def test_filter_output_is_subsequence_of_segments():
    kept = filter_candidates(RAW_TAKE_STOCK, "take stock")
    all_texts = [s.text for s in segment(RAW_TAKE_STOCK)]
    it = iter(all_texts)
    assert all(text in it for text in kept)


def test_parse_mwe_list_four_items():
    assert parse_mwe_list("MWEs: [figure out, take a shot, take a stab, work out]") == [
        "figure out", "take a shot", "take a stab", "work out",
    ]


def test_parse_mwe_list_three_items():
    assert parse_mwe_list("[bring in, hire on, take on]") == ["bring in", "hire on", "take on"]


def test_parse_mwe_list_drops_single_tokens(caplog):
    with caplog.at_level("WARNING"):
        assert parse_mwe_list("[recall]") == []
    assert "recall" in caplog.text


def test_parse_mwe_list_lowercases_and_dedups():
    assert parse_mwe_list("[Take On, take on, BRING IN]") == ["take on", "bring in"]


def test_parse_mwe_list_no_bracket():
    with pytest.raises(ResponseFormatError):
        parse_mwe_list("no list here")


def test_parse_mwe_list_idempotent():
    first = parse_mwe_list("[figure out, take a shot]")
    assert parse_mwe_list("[" + ", ".join(first) + "]") == first
