import pytest

from narayana_repdigits.hiprec import make_constants


@pytest.fixture(scope="session")
def consts():
    return make_constants(256)


@pytest.fixture(scope="session")
def consts64():
    return make_constants(64)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def report(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        _ACCEPTANCE[criterion] = line
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[key])
