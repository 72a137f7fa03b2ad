"""Shared pytest configuration.

The acceptance module registers one verdict per criterion; a terminal
summary hook prints them as explicit PASS/FAIL lines so the gate status
is readable even when stdout capture swallows in-test prints.
"""

ACCEPTANCE_VERDICTS: dict = {}


def record_verdict(number: int, name: str, ok: bool, detail: str = ""):
    ACCEPTANCE_VERDICTS[number] = (name, ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_VERDICTS):
        name, ok, detail = ACCEPTANCE_VERDICTS[number]
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status} - {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
