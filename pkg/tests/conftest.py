from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and (report.when == "call" or report.outcome == "failed"):
        n = report.nodeid.split("test_criterion_")[1].split("_")[0]
        _criteria[n] = "pass" if report.passed else "fail"


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_criteria, key=int):
            terminalreporter.write_line(f"criterion {n}: {_criteria[n]}")
