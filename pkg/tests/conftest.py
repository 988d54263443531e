import _verdicts


def pytest_terminal_summary(terminalreporter):
    if _verdicts.LINES:
        terminalreporter.section("acceptance verdicts")
        for line in _verdicts.LINES:
            terminalreporter.write_line(line)
