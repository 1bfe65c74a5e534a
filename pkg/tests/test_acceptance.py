"""The ten exit criteria, one test each; run with -s to see the status lines."""

import pytest

from burgesslab import acceptance

# filled by test_criterion, echoed by the terminal-summary hook in conftest
ACCEPTANCE_LINES = []


@pytest.fixture(scope="module", autouse=True)
def _compiled():
    acceptance.warmup()


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: f"{c.number:02d}-{c.__name__}")
def test_criterion(criterion):
    res = criterion()
    print(res.line())
    ACCEPTANCE_LINES.append(res.line())
    assert res.passed, res.line()


def test_verify_command_exit_code(capsys):
    from burgesslab.cli import main

    code = main(["verify"])
    out, err = capsys.readouterr()
    assert code == 0
    assert err.count("[PASS]") == 10
    assert out.splitlines()[0] == "criterion,name,passed,seconds,limit,detail"
