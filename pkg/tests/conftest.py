import pytest

from disto.cayley import enumerate_ball
from disto.presentation import CLOSED, make_presentation

_OUTCOMES: dict = {}
_NOTES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        _OUTCOMES[marker.args[0]] = rep.outcome


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        status = "PASS" if _OUTCOMES[n] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {_NOTES.get(n, '')}")


@pytest.fixture
def note(request):
    n = request.node.get_closest_marker("criterion").args[0]

    def write(text: str) -> None:
        _NOTES[n] = text
        print(f"criterion {n}: {text}")

    return write


@pytest.fixture(scope="session")
def g2():
    return make_presentation(CLOSED, 2)


@pytest.fixture(scope="session")
def ball6(g2):
    return enumerate_ball(g2, 6)


@pytest.fixture(scope="session")
def ball4(g2):
    return enumerate_ball(g2, 4)
