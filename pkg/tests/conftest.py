import pytest
from hypothesis import HealthCheck, settings

from fusiongraphs.algsearch import scan_ring
from fusiongraphs.fusionring import ring_h4, ring_h6, ring_izumi_i2

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def h4():
    return ring_h4()


@pytest.fixture(scope="session")
def h6():
    return ring_h6()


@pytest.fixture(scope="session")
def i2_5():
    return ring_izumi_i2(5)


@pytest.fixture(scope="session")
def h4_scan(h4):
    return scan_ring(h4)


@pytest.fixture(scope="session")
def h6_scan(h6):
    return scan_ring(h6)


@pytest.fixture(scope="session")
def i2_5_scan(i2_5):
    return scan_ring(i2_5)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call":
                lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
