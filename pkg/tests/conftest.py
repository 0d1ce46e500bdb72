from fractions import Fraction

from hypothesis import strategies as st

from cuspbound.flow import canonicalize_flow


def flow(*xs):
    return canonicalize_flow([Fraction(x) for x in xs])


@st.composite
def flows(draw, min_d=2, max_d=6, max_num=6, max_den=4):
    d = draw(st.integers(min_d, max_d))
    raw = draw(st.lists(
        st.fractions(min_value=-max_num, max_value=max_num, max_denominator=max_den),
        min_size=d, max_size=d,
    ))
    return canonicalize_flow(raw, project=True)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
