import sys
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
SPEC_DIR = ROOT / "demos" / "specs"
sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")

# criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture(scope="session")
def spec_dir():
    return SPEC_DIR
