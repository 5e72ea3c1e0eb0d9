"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from quartic_sieve import acceptance

from .conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(check):
    result = check()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail
