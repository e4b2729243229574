import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "REPORT", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines, key=lambda k: (int(k.split()[0]), k)):
        terminalreporter.write_line(lines[key])
