import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        crit = dict(report.user_properties).get("criterion")
        if crit is not None:
            _ACCEPTANCE[crit] = (report.outcome, dict(report.user_properties).get("detail", ""))


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", (mark.args[0], mark.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), (outcome, detail) in sorted(_ACCEPTANCE.items()):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] {n:2d}. {title}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
