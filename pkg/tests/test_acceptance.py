"""Acceptance suite: one check per criterion, each printing a pass/fail line.

The checks themselves live next to the verify-paper command so that the CLI
and the test suite exercise the identical code paths.
"""

import pytest

from cfkzero.cli import (
    _check_cable_closed_forms,
    _check_involutive,
    _check_properties,
    _check_regimes,
    _check_sharpness,
    _check_staircase_extraction,
    _check_sum_oracle,
)

CRITERIA = [
    ("criterion-1 staircase extraction", _check_staircase_extraction),
    ("criterion-2 cabling closed forms", _check_cable_closed_forms),
    ("criterion-3 connected-sum oracle equivalence", _check_sum_oracle),
    ("criterion-4 local-equivalence regimes", _check_regimes),
    ("criterion-5 cable sharpness and tau", _check_sharpness),
    ("criterion-6 involutive identities", _check_involutive),
    ("criterion-7 randomized property suites", _check_properties),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[name for name, _ in CRITERIA])
def test_acceptance_criterion(name, check):
    passed, detail = check()
    print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    assert passed, f"{name}: {detail}"
