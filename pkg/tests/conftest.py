import pytest

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion for the end-of-run summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    info = {"detail": ""}
    _CRITERIA[label] = (False, "")
    yield info
    rep = getattr(request.node, "rep_call", None)
    _CRITERIA[label] = (bool(rep and rep.passed), info["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
