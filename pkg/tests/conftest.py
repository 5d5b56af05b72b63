import pytest

from edmonds.exactfield import make_field
from helpers import skew_space


@pytest.fixture
def skew():
    return skew_space()


@pytest.fixture(params=["Fp:7", "Fp:10007", "Q"], ids=["F7", "F10007", "Q"])
def field(request):
    return make_field(request.param)



def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
