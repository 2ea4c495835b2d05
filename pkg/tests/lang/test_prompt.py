"""Tests for instruction normalization in bilat.lang.prompt."""

import pytest

from bilat.lang import EmptyInstructionError, PromptTemplate, normalize_instruction


PHOTO = PromptTemplate(prefix="a photo of a ")


def test_default_template_trims_and_lowercases():
    assert normalize_instruction("  Softly Grasp the Cup \n") == "softly grasp the cup"


def test_prefix_is_applied_once():
    once = normalize_instruction("Strongly grasp the cup", PHOTO)
    assert once == "a photo of a strongly grasp the cup"
    assert normalize_instruction(once, PHOTO) == once


def test_suffix_and_case_preservation():
    template = PromptTemplate(suffix=" please", lowercase=False)
    assert normalize_instruction("Twist It", template) == "Twist It please"
    assert normalize_instruction("Twist It please", template) == "Twist It please"


@pytest.mark.parametrize("text", ["", "   ", "\t\n", None])
def test_empty_instructions_are_rejected(text):
    with pytest.raises(EmptyInstructionError):
        normalize_instruction(text)


def test_prefix_inside_a_word_is_not_mistaken_for_the_prefix():
    template = PromptTemplate(prefix="a")
    once = normalize_instruction("apple on the cup", template)
    assert once == "a apple on the cup"
    assert normalize_instruction(once, template) == once


def test_suffix_inside_a_word_is_not_mistaken_for_the_suffix():
    template = PromptTemplate(suffix="ly")
    once = normalize_instruction("grasp softly", template)
    assert once == "grasp softly ly"
    assert normalize_instruction(once, template) == once


def test_whitespace_only_template_is_ignored():
    assert normalize_instruction("grasp the cup", PromptTemplate(prefix="  ", suffix=" ")) == "grasp the cup"
