from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from zmeasures.partitions import Partition

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def partitions_st(max_n: int = 8, max_parts: int = 6):
    return st.lists(st.integers(1, max_n), min_size=0, max_size=max_parts).map(
        lambda xs: Partition(sorted(xs, reverse=True))).filter(lambda p: p.n <= max_n)


thetas_st = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), Fraction(5, 2)])


@pytest.fixture(scope="session")
def ps1():
    from zmeasures.exact import parse_exact
    from zmeasures.zmeasure import ZParams

    return ZParams(parse_exact("1+1i"), parse_exact("1-1i"), 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
