import pytest

_RESULTS = []


class CriterionLog:
    def __init__(self, name):
        self.name = name

    def record(self, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {self.name}: {detail}"
        _RESULTS.append(line)
        print(line)
        return ok


@pytest.fixture
def criterion(request):
    return CriterionLog(request.node.name)


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
