"""The acceptance matrix; each criterion prints one PASS/FAIL line (run with -s to see them)."""
import pytest

from configlike.acceptance import CRITERIA, check_float_pattern, check_group_axioms


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    row = CRITERIA[number]()
    print(f"criterion {number}: {row.line()} {row.detail}")
    assert row.passed, row.detail


def test_group_axioms_row():
    row = check_group_axioms()
    print(row.line())
    assert row.passed


def test_float_pattern_row():
    row = check_float_pattern()
    print(row.line())
    assert row.passed


def test_negative_controls_fail():
    assert not check_group_axioms(corrupt=True).passed
    assert not check_float_pattern(eps=0.0).passed
