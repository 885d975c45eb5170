import numpy as np
import pytest

from nfsar import ApertureGrid, PointScatterer, Scene, paper_preset, simulate_cube

# filled by tests/test_acceptance.py, printed in the terminal summary
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20211014)


@pytest.fixture(scope="session")
def band8():
    radar, _ = paper_preset(num_k=8)
    return radar


@pytest.fixture(scope="session")
def small_aperture():
    return ApertureGrid.centered(nx=16, ny=16, dx=1e-3, dy=1e-3)


@pytest.fixture(scope="session")
def small_cube(band8, small_aperture):
    tgt = PointScatterer(small_aperture.x[10], small_aperture.y[5], 0.1)
    return simulate_cube(band8, small_aperture, Scene((tgt,)))
