import pytest

from imperfect_games.io import fixture_path, load_game


@pytest.fixture(scope="session")
def fig1():
    return load_game(fixture_path("fig1.game"))


@pytest.fixture(scope="session")
def fig3():
    return load_game(fixture_path("fig3.game"))


ACCEPTANCE: dict = {}


def record(criterion: str, passed: bool, detail: str = "") -> None:
    """Remember an acceptance outcome and print its one-line summary."""
    line = f"{criterion} {'PASS' if passed else 'FAIL'} {detail}".rstrip()
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
