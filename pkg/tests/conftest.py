"""Collects one verdict line per acceptance criterion and prints them after the run."""

VERDICTS: list[str] = []


def record(label: str, measured: float, bound: float, ok: bool, note: str = "") -> str:
    line = f"criterion {label:<4} {'PASS' if ok else 'FAIL'}  measured={measured:.3e}  bound={bound:.1e}"
    if note:
        line += f"  ({note})"
    VERDICTS.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
