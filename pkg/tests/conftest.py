from pathlib import Path

import pytest

from transcov.langid import DetectionConfig, load_detector, load_profiles

FIXTURES = Path(__file__).parent / "fixtures"
HELDOUT = Path(__file__).parent / "data" / "heldout"


@pytest.fixture(scope="session")
def profiles():
    return load_profiles()


@pytest.fixture(scope="session")
def detector():
    return load_detector("builtin", DetectionConfig())


@pytest.fixture
def fixtures_dir():
    return FIXTURES


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, description): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, description = marker.args
    if call.when == "setup" and call.excinfo is not None:
        skipped = call.excinfo.errisinstance(pytest.skip.Exception)
        _ACCEPTANCE[number] = ("SKIP" if skipped else "FAIL", description)
    elif call.when == "call":
        if call.excinfo is None:
            status = "PASS"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            status = "SKIP"
        else:
            status = "FAIL"
        _ACCEPTANCE[number] = (status, description)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, description = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{status} criterion {number}: {description}")
