import pytest

from tself import selftest
from tself.selftest import SUITES, run_suites


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes(suite):
    results = run_suites([suite], seed=0)
    assert len(results) == len(SUITES[suite])
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert not failed


def test_all_expands_to_every_suite(monkeypatch):
    for name in list(SUITES):
        monkeypatch.setitem(selftest.SUITES, name, [("noop", lambda rng: (True, ""))])
    assert [r.suite for r in run_suites(["all"])] == list(SUITES)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(["nope"])


def test_crashing_check_is_a_failure(monkeypatch):
    def boom(rng):
        raise ZeroDivisionError("boom")

    monkeypatch.setitem(selftest.SUITES, "core", [("boom", boom)])
    (result,) = run_suites(["core"])
    assert not result.passed
    assert result.detail == "ZeroDivisionError: boom"
