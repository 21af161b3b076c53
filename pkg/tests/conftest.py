import pytest
from hypothesis import HealthCheck, settings

from widemorita.exactla import GF, QQ

settings.register_profile(
    "exact",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")

F101 = GF(101)


@pytest.fixture(params=[QQ, F101], ids=["Q", "Fp101"])
def field(request):
    return request.param


@pytest.fixture
def fp():
    return F101


_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    mark = getattr(report, "criterion", None)
    if mark is None or (report.when != "call" and report.passed):
        return
    entry = _CRITERIA.setdefault(mark[0], [mark[1], True])
    if not report.passed:
        entry[1] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
