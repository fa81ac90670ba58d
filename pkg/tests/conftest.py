"""Collects acceptance verdicts and prints them after the run."""

ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, passed: bool, text: str) -> str:
    line = f"[criterion {number:2d}] {'PASS' if passed else 'FAIL'}: {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
