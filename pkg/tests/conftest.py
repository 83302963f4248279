import pytest

_OUTCOMES = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; its PASS/FAIL line is printed in the summary."""
    entry = {"label": None, "detail": ""}

    def record(label, detail=""):
        entry["label"], entry["detail"] = label, detail

    yield record
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    if entry["label"] is not None:
        _OUTCOMES.append((entry["label"], passed, entry["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_OUTCOMES, key=lambda o: int(o[0].split()[1].rstrip(":"))):
        line = f"{'PASS' if passed else 'FAIL'}  {label}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
