"""One PASS/FAIL line per acceptance criterion, shown in the pytest summary."""

LINES: list[str] = []


def report(name: str, passed: bool, detail: str) -> bool:
    line = f"{'PASS' if passed else 'FAIL'} {name}: {detail}"
    LINES.append(line)
    print(line)
    return passed
