from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from fixfig.geometry import SelfMap
from fixfig.spaces import FiniteDistanceSpace, b_from_s, builtin_space, s_from_metric

LINE = [-3, -1, 1, 3, 12, 18]
EXAMPLES = Path(__file__).resolve().parent.parent / "examples"


@pytest.fixture
def line_metric():
    return builtin_space("abs-metric", LINE)


@pytest.fixture
def line_s():
    return builtin_space("second-s-metric", LINE)


@pytest.fixture
def line_b(line_s):
    return b_from_s(line_s)


def move_12(space):
    return SelfMap.from_labels(space, {"12": "18"})


@pytest.fixture
def shift_map(line_metric):
    return move_12(line_metric)


def idx(space, *labels):
    return tuple(space.index(x) for x in labels)


# ---------------------------------------------------------------- strategies


@st.composite
def metric_spaces(draw, min_n=1, max_n=6, max_weight=6):
    n = draw(st.integers(min_n, max_n))
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = draw(st.integers(1, max_weight))
            den = draw(st.sampled_from([1, 1, 2, 3]))
            d[i][j] = d[j][i] = Fraction(w, den)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return FiniteDistanceSpace.metric([f"p{i}" for i in range(n)], d)


@st.composite
def s_spaces(draw, min_n=1, max_n=5):
    if draw(st.booleans()):
        return s_from_metric(draw(metric_spaces(min_n, max_n)))
    labels = draw(st.lists(st.integers(-12, 24), min_size=min_n, max_size=max_n, unique=True))
    return builtin_space("second-s-metric", sorted(labels))


@st.composite
def any_spaces(draw, min_n=1, max_n=5):
    kind = draw(st.sampled_from(["metric", "s-metric", "b-metric"]))
    if kind == "metric":
        return draw(metric_spaces(min_n, max_n))
    s = draw(s_spaces(min_n, max_n))
    return s if kind == "s-metric" else b_from_s(s)


@st.composite
def self_maps(draw, n):
    images = []
    for x in range(n):
        if draw(st.integers(0, 2)) == 0:
            images.append(draw(st.integers(0, n - 1)))
        else:
            images.append(x)
    return SelfMap(tuple(images))


@st.composite
def spaces_with_maps(draw, min_n=1, max_n=5):
    space = draw(any_spaces(min_n, max_n))
    return space, draw(self_maps(space.n))


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): one acceptance criterion, reported in the summary")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if call.when == "setup" and call.excinfo is not None:
        _ACCEPTANCE[mark.args[0]] = "FAIL"
    elif call.when == "call":
        _ACCEPTANCE[mark.args[0]] = "FAIL" if call.excinfo is not None else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{verdict}  {label}")
