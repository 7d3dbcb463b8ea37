import pytest

CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome under its number."""
    number = request.node.get_closest_marker("criterion").args[0]
    detail = {"text": ""}
    yield detail
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    CRITERIA[number] = ("FAIL" if failed else "PASS", detail["text"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status, text = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
