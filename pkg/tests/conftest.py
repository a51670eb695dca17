import pytest

from npst.gfield import make_field

FIELD_PARAMS = [(5, 1), (7, 1), (2, 3), (2, 4)]


@pytest.fixture(scope="session")
def gf5():
    return make_field(5)


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3, [1, 1, 0, 1])


@pytest.fixture(scope="session", params=FIELD_PARAMS, ids=lambda pr: f"GF({pr[0]}^{pr[1]})")
def small_field(request):
    return make_field(*request.param)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
