from itertools import combinations_with_replacement

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from u2reduce import is_generic, moment_never_zero, validate

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def admissible(pairs) -> bool:
    rep = validate(pairs)
    return is_generic(rep) and moment_never_zero(rep)


def rep_family(max_r=3, max_k=5, max_abs_l=2):
    """Every admissible multiset of summands with r <= 2, plus every fifth
    admissible triple, in a fixed order."""
    summands = [(l, k) for k in range(max_k + 1) for l in range(-max_abs_l, max_abs_l + 1)]
    out = []
    for r in range(1, max_r + 1):
        combos = [c for c in combinations_with_replacement(summands, r) if admissible(c)]
        out.extend(combos if r < 3 else combos[::5])
    return [validate(c) for c in out]


summand_st = st.tuples(st.integers(-2, 2), st.integers(0, 5))
rep_st = st.lists(summand_st, min_size=1, max_size=3).filter(admissible).map(validate)
nu_st = st.tuples(st.integers(-12, 12), st.integers(-12, 12)).filter(lambda v: v != (0, 0))


@pytest.fixture
def mu2():
    return validate([(0, 2)])


@st.composite
def transverse_case(draw):
    """An admissible rep with a ray strictly inside one of its wedges."""
    from u2reduce import wedges

    rep = draw(rep_st.filter(lambda r: len(wedges(r)) > 0))
    w = draw(st.sampled_from(wedges(rep)))
    s, t = draw(st.integers(1, 20)), draw(st.integers(1, 20))
    return rep, (s * w.lo.x + t * w.hi.x, s * w.lo.y + t * w.hi.y)
