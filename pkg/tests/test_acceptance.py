"""Acceptance criteria, one test per check; the PASS/FAIL lines appear in the terminal summary."""

import pytest

from levicav import report, trap


@pytest.mark.parametrize("check_id", list(report.CHECKS))
def test_criterion(check_id, acceptance_log):
    check = report.run_check(check_id)
    print(check.line())
    acceptance_log.append(check.line())
    assert check.passed, check.line()


def test_every_check_has_provenance():
    for cid in ("AC-1", "AC-5", "AC-17"):
        assert report.run_check(cid).provenance in ("published", "derived", "property")


def test_checks_detect_a_broken_constant(monkeypatch):
    # a wrong speed of light moves the trap frequency by 10x and must be caught
    monkeypatch.setattr(trap, "C", trap.C / 100.0)
    check = report.run_check("AC-4")
    print(check.line())
    assert not check.passed


def test_crashing_check_counts_as_failure(monkeypatch):
    def boom():
        raise RuntimeError("broken")

    monkeypatch.setitem(report.CHECKS, "AC-3", boom)
    check = report.run_check("AC-3")
    assert not check.passed and "RuntimeError" in check.computed
