import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus as _corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus_images():
    return _corpus.corpus()


@pytest.fixture(scope="session")
def logo8():
    return _corpus.logo_watermark()


@pytest.fixture(scope="session")
def natural_wm8():
    return _corpus.natural_watermark()


@pytest.fixture
def rng():
    return __import__("numpy").random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
