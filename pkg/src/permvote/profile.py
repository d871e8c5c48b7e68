"""Rankings, anonymous weighted profiles and the tallies derived from them.

Weights are kept as :class:`fractions.Fraction` throughout; dominance and
winner sets hinge on exact ties, so no floating point is allowed past the
parsing boundary.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

__all__ = [
    "ProfileError",
    "Ranking",
    "Profile",
    "MarginMatrix",
    "PositionalTally",
    "parse_profile",
    "restrict",
    "margins",
    "positional_tally",
    "format_weight",
]

_ID_RE = re.compile(r"^[^\s>,]+$")
_WEIGHT_RE = re.compile(r"^(\d+)(?:/(\d+))?$")


class ProfileError(ValueError):
    """Malformed ballots or an invalid profile."""


def _check_id(x: str) -> str:
    if not isinstance(x, str) or not _ID_RE.match(x):
        raise ProfileError(f"invalid alternative id {x!r}")
    return x


class Ranking(tuple):
    """A strict total order, most preferred first.

    It is a plain tuple of alternative ids, so it hashes and compares cheaply;
    positions are 1-based.
    """

    __slots__ = ()

    def __new__(cls, order: Iterable[str]):
        order = tuple(order)
        if not order:
            raise ProfileError("empty ranking")
        for x in order:
            _check_id(x)
        if len(set(order)) != len(order):
            raise ProfileError(f"ranking repeats an alternative: {'>'.join(order)}")
        return super().__new__(cls, order)

    @classmethod
    def parse(cls, text: str) -> "Ranking":
        return cls(part.strip() for part in text.strip().split(">"))

    def position(self, a: str) -> int:
        return self.index(a) + 1

    def prefers(self, a: str, b: str) -> bool:
        return self.index(a) < self.index(b)

    def restrict(self, subset) -> "Ranking":
        keep = set(subset)
        return Ranking(x for x in self if x in keep)

    def __str__(self) -> str:
        return ">".join(self)

    def __repr__(self) -> str:
        return f"Ranking({'>'.join(self)})"


def format_weight(w: Fraction) -> str:
    if w.denominator == 1:
        return str(w.numerator)
    return f"{w.numerator}/{w.denominator}"


def _as_fraction(w) -> Fraction:
    # floats convert to their exact binary value
    w = Fraction(w)
    if w < 0:
        raise ProfileError(f"negative weight {w}")
    return w


class Profile:
    """An anonymous profile: a weighted multiset of rankings over a fixed set.

    ``alternatives`` keeps first-seen order; zero-weight rankings are dropped.
    Instances are immutable, and the derived tallies are cached.
    """

    def __init__(self, entries, alternatives: Iterable[str] | None = None):
        if isinstance(entries, Mapping):
            entries = entries.items()
        weights: dict[Ranking, Fraction] = {}
        seen: list[str] = list(alternatives) if alternatives is not None else []
        for x in seen:
            _check_id(x)
        if len(set(seen)) != len(seen):
            raise ProfileError("duplicate alternative in alternative set")
        ground = set(seen) if seen else None

        for ranking, w in entries:
            if not isinstance(ranking, Ranking):
                ranking = Ranking.parse(ranking) if isinstance(ranking, str) else Ranking(ranking)
            w = _as_fraction(w)
            if ground is None:
                seen = list(ranking)
                ground = set(seen)
            elif set(ranking) != ground or len(ranking) != len(ground):
                raise ProfileError(
                    f"ranking {ranking} is not a permutation of {{{', '.join(seen)}}}"
                )
            if w:
                weights[ranking] = weights.get(ranking, Fraction(0)) + w

        total = sum(weights.values(), Fraction(0))
        if not seen or total <= 0:
            raise ProfileError("empty profile")
        self._alternatives = tuple(seen)
        self._weights = weights
        self._total = total

    @property
    def alternatives(self) -> tuple[str, ...]:
        return self._alternatives

    @property
    def total_weight(self) -> Fraction:
        return self._total

    def __len__(self) -> int:
        return len(self._weights)

    def __iter__(self):
        return iter(self._weights)

    def items(self):
        return self._weights.items()

    def weight(self, ranking) -> Fraction:
        if not isinstance(ranking, Ranking):
            ranking = Ranking.parse(ranking) if isinstance(ranking, str) else Ranking(ranking)
        return self._weights.get(ranking, Fraction(0))

    def probability(self, ranking) -> Fraction:
        return self.weight(ranking) / self._total

    def normalized(self) -> "Profile":
        return Profile(
            ((r, w / self._total) for r, w in self._weights.items()),
            alternatives=self._alternatives,
        )

    def has_integer_weights(self) -> bool:
        return all(w.denominator == 1 for w in self._weights.values())

    def sorted_alternatives(self) -> list[str]:
        return sorted(self._alternatives)

    def relabel(self, mapping: Mapping[str, str]) -> "Profile":
        return Profile(
            ((Ranking(mapping[x] for x in r), w) for r, w in self._weights.items()),
            alternatives=[mapping[x] for x in self._alternatives],
        )

    def restrict(self, subset) -> "Profile":
        return restrict(self, subset)

    @cached_property
    def margins(self) -> "MarginMatrix":
        return MarginMatrix(self)

    @cached_property
    def tally(self) -> "PositionalTally":
        return PositionalTally(self)

    def to_text(self) -> str:
        """Serialize in the ballot grammar; ``parse_profile`` inverts it exactly."""
        return "".join(f"{format_weight(w)}: {r}\n" for r, w in self._weights.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Profile):
            return NotImplemented
        return set(self._alternatives) == set(other._alternatives) and self._weights == other._weights

    def __hash__(self) -> int:
        return hash((frozenset(self._alternatives), frozenset(self._weights.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_weight(w)}:{r}" for r, w in self._weights.items())
        return f"Profile({{{body}}})"


def parse_profile(text: str) -> Profile:
    """Parse ballot text: ``weight: a>b>c`` per line, ``#`` comments, blanks."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise ProfileError(f"line {lineno}: expected 'weight: ranking'")
        head = head.strip()
        if head.startswith("-"):
            raise ProfileError(f"line {lineno}: negative weight {head}")
        m = _WEIGHT_RE.match(head)
        if not m:
            raise ProfileError(f"line {lineno}: malformed weight {head!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ProfileError(f"line {lineno}: zero denominator")
        weight = Fraction(int(num), int(den) if den else 1)
        parts = [p.strip() for p in tail.split(">")]
        if len(parts) < 2 or any(not p for p in parts):
            raise ProfileError(f"line {lineno}: malformed ranking {tail.strip()!r}")
        try:
            ranking = Ranking(parts)
        except ProfileError as exc:
            raise ProfileError(f"line {lineno}: {exc}") from None
        entries.append((ranking, weight))
    if not entries:
        raise ProfileError("empty profile")
    return Profile(entries)


def restrict(p: Profile, subset) -> Profile:
    """Marginalize ``p`` onto ``subset``, summing weights of rankings that agree there."""
    subset = list(subset)
    if not subset:
        raise ProfileError("cannot restrict to an empty set")
    unknown = [x for x in subset if x not in p.alternatives]
    if unknown:
        raise ProfileError(f"unknown alternatives {unknown}")
    keep = set(subset)
    order = [x for x in p.alternatives if x in keep]
    out: dict[Ranking, Fraction] = {}
    for r, w in p.items():
        r2 = Ranking(x for x in r if x in keep)
        out[r2] = out.get(r2, Fraction(0)) + w
    return Profile(out.items(), alternatives=order)


class MarginMatrix:
    """Pairwise support: ``support(a, b)`` is the weight ranking a above b."""

    def __init__(self, p: Profile):
        self.alternatives = p.alternatives
        self.total_weight = p.total_weight
        sup: dict[tuple[str, str], Fraction] = {
            (a, b): Fraction(0) for a in p.alternatives for b in p.alternatives if a != b
        }
        for r, w in p.items():
            for a, b in combinations(r, 2):
                sup[a, b] += w
        self._support = sup

    def support(self, a: str, b: str) -> Fraction:
        try:
            return self._support[a, b]
        except KeyError:
            raise ProfileError(f"no pairwise support for ({a!r}, {b!r})") from None

    def margin(self, a: str, b: str) -> Fraction:
        return self.support(a, b) - self.support(b, a)

    def as_dict(self) -> dict[tuple[str, str], Fraction]:
        return dict(self._support)


class PositionalTally:
    """``s(j, a)``: weight of rankings placing a at position j or better."""

    def __init__(self, p: Profile):
        self.alternatives = p.alternatives
        self.size = len(p.alternatives)
        at = {a: [Fraction(0)] * self.size for a in p.alternatives}
        for r, w in p.items():
            for i, a in enumerate(r):
                at[a][i] += w
        cum = {}
        for a, row in at.items():
            acc, out = Fraction(0), []
            for v in row:
                acc += v
                out.append(acc)
            cum[a] = tuple(out)
        self._cum = cum

    def s(self, j: int, a: str) -> Fraction:
        if not 1 <= j <= self.size:
            raise ProfileError(f"position {j} outside 1..{self.size}")
        return self._cum[a][j - 1]

    def row(self, a: str) -> tuple[Fraction, ...]:
        return self._cum[a]


def margins(p: Profile) -> MarginMatrix:
    return p.margins


def positional_tally(p: Profile) -> PositionalTally:
    return p.tally
