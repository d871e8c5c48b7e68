from pathlib import Path

import pytest
from hypothesis import strategies as st

from permvote.fixtures import FIXTURES, load_fixture
from permvote.profile import Profile, Ranking

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(params=sorted(FIXTURES))
def any_fixture(request):
    return load_fixture(request.param)


@pytest.fixture
def fx():
    return load_fixture


@st.composite
def profiles(draw, min_alts=2, max_alts=5, max_ballots=7, fractional=False):
    m = draw(st.integers(min_alts, max_alts))
    alts = list("abcdefg"[:m])
    n = draw(st.integers(1, max_ballots))
    ballots = draw(st.lists(st.permutations(alts), min_size=n, max_size=n))
    if fractional:
        weights = draw(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=7),
                                min_size=n, max_size=n))
    else:
        weights = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    if sum(weights) == 0:
        weights[0] = 1
    return Profile([(Ranking(b), w) for b, w in zip(ballots, weights)], alternatives=alts)


# criterion number -> list of (ok, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list] = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(number, []).append((ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p for p, _ in parts)
        shown = [d for p, d in parts if not p] if not ok else [d for _, d in parts]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {'; '.join(shown)}")
