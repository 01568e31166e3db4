import functools
import warnings

import pytest

from neumann3d.quadrature import generate_points
from neumann3d.surfaces import get_surface

warnings.filterwarnings("ignore", message="The TBB threading layer requires")


@functools.lru_cache(maxsize=None)
def cached_rule(surface: str, inv_h: int):
    return generate_points(get_surface(surface), 1.0 / inv_h)


@pytest.fixture(scope="session")
def sphere16():
    return cached_rule("sphere", 16)


@pytest.fixture(scope="session")
def sphere32():
    return cached_rule("sphere", 32)


@pytest.fixture(scope="session")
def ellipsoid16():
    return cached_rule("ellipsoid", 16)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
