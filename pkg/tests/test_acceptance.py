"""Full-size acceptance run; prints one PASS/FAIL line per criterion."""

import pytest

from arcspace import acceptance


@pytest.mark.parametrize("check", acceptance.CHECKS, ids=lambda c: c.__name__)
def test_criterion(check, capsys):
    if check in (acceptance.check_cancellation, acceptance.check_point_groups):
        result = check(True, acceptance.DEFAULT_SEED)
    else:
        result = check(True)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
