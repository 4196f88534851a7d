import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from credalvol.simplex import make_credal_polytope

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _ACCEPTANCE[item.nodeid] = m.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _ACCEPTANCE:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = dict(report.user_properties).get("detail", "")
        _OUTCOMES[report.nodeid] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_ACCEPTANCE.items(), key=lambda kv: kv[1][0]):
        outcome, detail = _OUTCOMES.get(nodeid, ("not run", ""))
        tag = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        line = f"[{tag}] {number:2d}. {title}"
        if detail:
            line += f" -- {detail}"
        tr.write_line(line)


def random_points(rng, d, n):
    return rng.dirichlet(np.ones(d), size=n)


@st.composite
def polytopes(draw, d=st.integers(2, 4), n=st.integers(1, 8)):
    """Random credal polytopes from Dirichlet points."""
    dd = draw(d)
    nn = draw(n)
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return make_credal_polytope(random_points(rng, dd, nn))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
