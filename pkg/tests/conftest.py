from hypothesis import HealthCheck, settings

settings.register_profile(
    "latticeforge",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("latticeforge")

# One PASS/FAIL line per acceptance criterion, printed after the run.
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.split("::")[-1][len("test_criterion_"):]
        num, _, label = name.partition("_")
        prev = _criteria.get(int(num))
        failed = report.failed or (prev is not None and prev[0] == "FAIL")
        _criteria[int(num)] = ("FAIL" if failed else "PASS", label.replace("_", " "), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        status, label, secs = _criteria[num]
        terminalreporter.write_line(f"{status}  criterion {num:2d}  {label}  ({secs:.2f} s)")
