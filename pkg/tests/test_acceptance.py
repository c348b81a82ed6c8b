"""Acceptance gate: every verification criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or on
failure) and asserts the criterion's structured result.
"""

import pytest

from secantlab.acceptance import CRITERIA, run_suite, suite_names


def _check(cid: int):
    result = CRITERIA[cid]()
    line = (
        f"{'PASS' if result.passed else 'FAIL'} criterion {result.cid:>2} "
        f"({result.seconds:.3f}s/{result.budget}s) {result.title}: {result.detail}"
    )
    print(line)
    assert result.passed, line


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid):
    _check(cid)


def test_suite_partition():
    assert set(suite_names()) == {"fast", "full"}
    fast = {r.cid for r in run_suite("fast")}
    assert fast == {4, 5, 7, 8, 9, 11, 12, 13}
    with pytest.raises(ValueError):
        run_suite("everything")
