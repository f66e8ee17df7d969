import pytest

_CRITERIA: dict[int, list] = {}

TITLES = {
    1: "domination invariants",
    2: "recursive tree height",
    3: "sampler exactness",
    4: "pagerank walk",
    5: "diameter engine",
    6: "bound envelope",
    7: "structural laws",
    8: "determinism",
}


@pytest.fixture
def criterion():
    """``criterion(num, label, ok, detail)`` records one sub-check."""
    def record(num, label, ok, detail=""):
        _CRITERIA.setdefault(num, []).append((label, bool(ok), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entries = _CRITERIA[num]
        failed = [e for e in entries if not e[1]]
        status = "PASS" if not failed else "FAIL"
        if failed:
            detail = "; ".join(f"{label}: {d}" for label, _, d in failed)
        elif len(entries) == 1:
            detail = entries[0][2]
        else:
            detail = f"{len(entries)} checks"
        tr.write_line(f"criterion {num} {TITLES.get(num, '')}: {status} ({detail})")
