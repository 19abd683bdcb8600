import pytest

from crow_sense.params import SystemParams


@pytest.fixture
def default():
    return SystemParams()


@pytest.fixture
def bound():
    """Sensing cavity at 2.4: bound states near 0 and near 1."""
    return SystemParams(delta_s=2.4)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split(":")[0][1:])):
        terminalreporter.write_line(line)
