import pytest

from charp_closure.cli.dsl import parse_session
from charp_closure.cli.runner import run_session
from charp_closure.cli.scenarios import SCENARIOS, run_scenarios
from charp_closure.src.verdicts import Status


def test_every_check_has_an_expectation():
    for text in SCENARIOS.values():
        assert all(check.options.expect is not None for check in parse_session(text).checks)


def test_hypersurface_scenario():
    report = run_session(parse_session(SCENARIOS["hypersurface-255"]))
    assert all(e.matched and e.certificate_verified for e in report.entries), [
        (e.name, e.status, e.narrative) for e in report.entries if not e.matched
    ]
    closed = next(e for e in report.entries if e.name == "frobenius_closed")
    assert closed.details["witness"] == "x"


@pytest.mark.slow
def test_one_dimensional_scenario():
    report = run_session(parse_session(SCENARIOS["one-dim-xy"]))
    assert report.exit_code == 0
    tight = [e for e in report.entries if e.name == "tight_member"]
    assert [e.details["positive_evidence"] for e in tight] == [[0, 1, 2, 3, 4]] * 3


@pytest.mark.slow
def test_veronese_scenario():
    report = run_session(parse_session(SCENARIOS["veronese-F2uv"]))
    assert report.exit_code == 0, [(e.name, e.status, e.narrative) for e in report.entries]
    member = next(e for e in report.entries if e.name == "member" and e.status is Status.OUT)
    assert member.details["witness_in_parent"] == "y*z^3"
    product = next(e for e in report.entries if e.name == "product_identity")
    assert product.status is Status.FAIL
    assert product.details["q1_in_q2"] is False


@pytest.mark.slow
def test_all_scenarios_match():
    report = run_scenarios(parallel=True)
    assert report.exit_code == 0
    assert len(report.entries) == sum(len(parse_session(t).checks) for t in SCENARIOS.values())
