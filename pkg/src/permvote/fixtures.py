"""Named reference profiles, stored in ballot format."""

from __future__ import annotations

from pathlib import Path

from .profile import Profile, parse_profile

# name -> (comment, ballots); ballots are canonical: parse + to_text is the identity
FIXTURES = {
    "P1": (
        "Black, Dodgson, Young and Kemeny counterexample",
        "1: a>b>c>d>e\n1: e>d>a>c>b\n1: b>c>d>e>a\n",
    ),
    "P2": (
        "Nanson counterexample",
        "1: e>a>b>c>d\n1: b>c>d>e>a\n",
    ),
    "P3": (
        "Minimax counterexample",
        "2: d>c>a>b\n2: b>c>d>a\n1: a>b>c>d\n",
    ),
    "P4": (
        "Fishburn counterexample",
        "1: a>b>c>d\n1: b>c>d>a\n",
    ),
    "P5": (
        "Bucklin is not strongly position-dominance efficient",
        "2: a>b>c\n1: b>a>c\n1: c>a>b\n",
    ),
    "E1a": (
        "a majority-dominates b but does not position-dominate it",
        "2: a>b>c\n1: b>c>a\n",
    ),
    "E1b": (
        "a position-dominates b but does not majority-dominate it",
        "1: a>c>d>b\n1: b>a>c>d\n1: c>d>b>a\n",
    ),
    "E2": (
        "position dominance changes under restriction to {a,b}",
        "1: a>b>c\n1: b>c>a\n",
    ),
    "E3": (
        "majority order a,b,c against position order b,a,c",
        "4/11: a>b>c\n2/11: b>a>c\n3/11: b>c>a\n2/11: c>a>b\n",
    ),
    "C3": (
        "Condorcet cycle",
        "1: a>b>c\n1: b>c>a\n1: c>a>b\n",
    ),
}


def fixture_text(name: str) -> str:
    comment, ballots = FIXTURES[name]
    return f"# {name}: {comment}\n{ballots}"


def load_fixture(name: str) -> Profile:
    return parse_profile(FIXTURES[name][1])


def emit_fixtures(directory) -> list[Path]:
    """Write every fixture as ``<name>.ballots`` under ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIXTURES:
        path = out / f"{name}.ballots"
        path.write_text(fixture_text(name), encoding="utf-8")
        written.append(path)
    return written
