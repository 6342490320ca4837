import pytest


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance.py" not in rep.nodeid:
                continue
            props = dict(rep.user_properties)
            lines.append((rep.nodeid, f"{outcome.upper():6s} {props.get('criterion', rep.nodeid)}"
                          + (f"  [{props['detail']}]" if "detail" in props else "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(record_property):
    """Label an acceptance test; ``criterion(name, detail=...)`` may be called again to add detail."""

    def label(name, detail=None):
        record_property("criterion", name)
        if detail is not None:
            record_property("detail", detail)

    return label
