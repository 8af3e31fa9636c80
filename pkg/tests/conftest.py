import json
import pathlib
from fractions import Fraction

import hypothesis
import pytest
from hypothesis import strategies as st

hypothesis.settings.register_profile("default", max_examples=30, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")

HERE = pathlib.Path(__file__).parent

small_rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
nonzero_rationals = small_rationals.filter(bool)


@st.composite
def twist_factors(draw, n):
    """Factors q_ij of an involutive diagonal twist: q_ij q_ji = 1, q_ii = 1."""
    q = [[Fraction(1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = draw(nonzero_rationals)
            q[i][j], q[j][i] = x, 1 / x
    return q


@pytest.fixture(scope="session")
def frozen():
    return json.loads((HERE / "frozen_values.json").read_text())


@pytest.fixture(scope="session")
def twist3():
    from gaudin_poisson.braiding import diagonal_twist
    return diagonal_twist([[1, 2, 3], [Fraction(1, 2), 1, Fraction(1, 5)], [Fraction(1, 3), 5, 1]])


@pytest.fixture(scope="session")
def twist2():
    from gaudin_poisson.braiding import diagonal_twist
    return diagonal_twist([[1, 2], [Fraction(1, 2), 1]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, count, elapsed, budget, failures = RESULTS[number]
        line = (f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  "
                f"({count} exact checks, {elapsed:.2f} s of {budget} s)")
        if failures:
            line += "  " + "; ".join(failures)
        terminalreporter.write_line(line)
