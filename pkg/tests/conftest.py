import numpy as np
import pytest

# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: int(c[1:])):
        passed, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{cid}: {'PASS' if passed else 'FAIL'}  {detail}")
