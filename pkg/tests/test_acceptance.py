"""Acceptance suite: one printed PASS/FAIL line per criterion.

Tolerances and runtime budgets live in lognls.acceptance; each criterion
is run once here and its summary line is printed regardless of outcome.
"""

import pytest

from lognls.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion, capsys):
    r = criterion()
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, r.line()
