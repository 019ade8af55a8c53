import sys

import pytest
from hypothesis import HealthCheck, settings

from affine_cybe import fixtures as fx

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=[c.name for c in fx.SYMPLECTIC])
def symplectic_case(request):
    return fx.BY_NAME[request.param]


@pytest.fixture(params=[c.name for c in fx.CYBE_CASES])
def cybe_case(request):
    return fx.BY_NAME[request.param]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
