import pytest

from dichroma.digraph import Digraph

from helpers import cycle

ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_LINES]

    def record(key, passed, text):
        line = f"{key} {'PASS' if passed else 'FAIL'} {text}"
        print(line)
        lines.append(line)
    return record


@pytest.fixture
def c3():
    return Digraph(3, cycle(3))


@pytest.fixture
def c5():
    return Digraph(5, cycle(5))
