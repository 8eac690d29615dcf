"""Acceptance suite: one PASS/FAIL line per criterion.

All twelve criteria are exact (tolerance 0): symbolic identities, integer
matrices and ring normal forms are compared for equality.  Run with
``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from hopfcalc.acceptance import CRITERIA, TOLERANCE, run_criterion


def test_tolerance_is_exact():
    assert TOLERANCE == 0


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number, seed=0)
    print(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    import sys

    from hopfcalc.acceptance import run_acceptance

    results = run_acceptance()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
