import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = getattr(item.function, "criterion", None)
    if criterion is None or report.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    _RESULTS[criterion] = (report.passed, item.function.__doc__.strip().splitlines()[0], detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, title, detail = _RESULTS[number]
        tr.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}"
                      + (f" [{detail}]" if detail else ""))
