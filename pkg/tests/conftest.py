import re


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA

    outcomes = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", getattr(report, "nodeid", ""))
            if not m or (key == "passed" and report.when != "call"):
                continue
            number = int(m.group(1))
            outcomes[number] = "FAIL" if key != "passed" or outcomes.get(number) == "FAIL" else "PASS"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        terminalreporter.write_line(f"criterion {number:2d} {outcomes.get(number, 'NOT RUN'):7s} {title}")
