import pytest
from hypothesis import HealthCheck, settings

from chaindiam.finmon import end_monoid

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def end3():
    return end_monoid(3)


@pytest.fixture(scope="session")
def end4():
    return end_monoid(4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
    passed = sum("PASS" in line for line in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
