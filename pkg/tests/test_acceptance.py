"""Acceptance gate: every release criterion, one test line per criterion.

The checks themselves live in clonebench.verify and are exactly what the
``clonebench verify`` command runs, so passing here and passing on the
command line are the same statement.
"""

import pytest

from clonebench import verify

_RESULTS = {}


def _result(number):
    if number not in _RESULTS:
        _RESULTS[number] = verify.run_criterion(number, seed=0)
    return _RESULTS[number]


@pytest.mark.parametrize("number", range(1, verify.N_CRITERIA + 1))
def test_criterion(number):
    res = _result(number)
    flag = "PASS" if res.passed else "FAIL"
    print(f"[{flag}] criterion {res.number:2d}: {res.title}")
    bad = [d for d in res.details if not d.passed]
    detail = "\n".join(
        f"  {d.label}: computed {d.computed!r}, reference {d.reference!r}, "
        f"residual {d.residual:.3e} > tolerance {d.tolerance:.1e}"
        for d in bad
    )
    assert res.passed, f"criterion {number} failed:\n{detail}"


def test_every_quoted_value_is_checked():
    # the report must carry explicit computed/reference rows for the quoted
    # special values, not only aggregate grid bounds
    quoted = {
        (1, 1.0), (1, 0.5), (1, 5.0 / 6.0), (1, 5.0 / 9.0),
        (2, 2.0 / 3.0),
        (4, 7.0 / 9.0), (4, 5.0 / 6.0), (4, 1.0 / 3.0),
        (5, 7.0 / 9.0), (5, 0.5),
        (7, 7.0 / 9.0), (7, 5.0 / 6.0), (7, 5.0 / 9.0),
        (9, 7.0 / 9.0), (9, 0.5),
    }
    for number, value in quoted:
        refs = [d.reference for d in _result(number).details]
        assert any(abs(r - value) < 1e-12 for r in refs), (number, value)


def test_failure_injection_is_detected():
    res = verify.run_criterion(3, seed=0, inject_failure=True)
    assert not res.passed
