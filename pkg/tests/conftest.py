import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nnrank.scalar import QuadScalar  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def rationals(max_num=50, max_den=20, min_value=None, max_value=None):
    s = st.fractions(min_value=min_value, max_value=max_value, max_denominator=max_den)
    if min_value is None and max_value is None:
        s = st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))
    return s


def quads(max_num=30, max_den=12):
    return st.builds(QuadScalar, rationals(max_num, max_den), rationals(max_num, max_den))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
