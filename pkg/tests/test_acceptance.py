"""One test per acceptance criterion, at the stated tolerances.

The PASS/FAIL line of each criterion is printed during the run and again in
the terminal summary.
"""

import pytest

from drgcert.acceptance import CRITERIA, AcceptanceContext, run_one

RESULTS = {}


@pytest.fixture(scope="module")
def ctx():
    return AcceptanceContext()


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_acceptance_criterion(ctx, number):
    result = run_one(number, ctx)
    RESULTS[number] = result
    print(result.line())
    assert result.passed, result.line()
