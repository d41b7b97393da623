import pytest

_RESULTS: list[tuple[str, str, str, float, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): numbered acceptance check")


@pytest.fixture
def detail(request):
    """Set ``detail.text`` to add a note to the criterion summary line."""
    class Note:
        text = ""
    note = Note()
    request.node.acceptance_note = note
    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        note = getattr(item, "acceptance_note", None)
        _RESULTS.append((str(marker.args[0]), item.name, rep.outcome, rep.duration,
                         note.text if note else ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, name, outcome, seconds, note in sorted(_RESULTS):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {label}: {verdict}  {name}  ({seconds:.1f} s)"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
