"""Repeat the acceptance lines in the terminal summary, passing or not."""

_lines = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _lines.extend(ln for ln in report.capstdout.splitlines() if ln.startswith("ACCEPTANCE "))


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(_lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(ln)
