import pytest

from rhogroups import recipes as R
from rhogroups.groups import build
from rhogroups.cli import default_corpus_text
from rhogroups.dsl import parse_corpus


def brute_rho_int(n_orders):
    out = 1
    for o in n_orders:
        out *= o
    return out


def trial_factor(n):
    """Oracle factorization by trial division, independent of sympy."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@pytest.fixture(scope="session")
def default_corpus():
    return parse_corpus(default_corpus_text())


@pytest.fixture(scope="session")
def corpus_groups(default_corpus):
    return [(label, build(recipe)) for label, recipe in default_corpus]


@pytest.fixture
def s3():
    return build(R.Symmetric(3))


@pytest.fixture
def s4():
    return build(R.Symmetric(4))


# --- acceptance summary: one PASS/FAIL line per criterion -------------------

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and report.passed:
        return
    number, title = marker.args
    ok = report.passed and _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
