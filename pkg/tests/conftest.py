import pytest

_LINES = []


@pytest.fixture
def emit(request):
    """Write a line to the terminal even with output capture on."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def write(line):
        _LINES.append(line)
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)

    return write


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
