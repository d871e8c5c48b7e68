"""Pairwise-majority and position dominance, plus the Schwartz set."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .profile import Profile, ProfileError

__all__ = [
    "DominanceRelation",
    "pm_dominates",
    "pos_dominates",
    "pm_relation",
    "pos_relation",
    "is_total_preorder",
    "has_condorcet_cycle",
    "schwartz_set",
    "schwartz_set_bruteforce",
    "dominant_sets",
    "BRUTEFORCE_LIMIT",
]

BRUTEFORCE_LIMIT = 12


def _check_pair(p: Profile, a: str, b: str) -> None:
    if a == b:
        raise ProfileError(f"dominance of {a!r} over itself is undefined")
    for x in (a, b):
        if x not in p.alternatives:
            raise ProfileError(f"unknown alternative {x!r}")


def pm_dominates(p: Profile, a: str, b: str) -> bool:
    """True iff at least as much weight ranks a above b as b above a."""
    _check_pair(p, a, b)
    m = p.margins
    return m.support(a, b) >= m.support(b, a)


def pos_dominates(p: Profile, a: str, b: str) -> bool:
    """True iff a's cumulative position tally weakly exceeds b's at every cutoff."""
    _check_pair(p, a, b)
    t = p.tally
    return all(x >= y for x, y in zip(t.row(a), t.row(b)))


@dataclass(frozen=True)
class DominanceRelation:
    """A weak dominance relation; ``pairs`` holds every (a, b) with a ⊵ b, a != b."""

    alternatives: tuple[str, ...]
    pairs: frozenset
    kind: str

    def holds(self, a: str, b: str) -> bool:
        if a == b:
            raise ProfileError(f"dominance of {a!r} over itself is undefined")
        return (a, b) in self.pairs

    def strictly(self, a: str, b: str) -> bool:
        return self.holds(a, b) and not self.holds(b, a)

    def is_complete(self) -> bool:
        return all(
            (a, b) in self.pairs or (b, a) in self.pairs
            for a, b in combinations(self.alternatives, 2)
        )

    def is_transitive(self) -> bool:
        return not any(
            (a, b) in self.pairs and (b, c) in self.pairs and (a, c) not in self.pairs
            for a, b, c in permutations(self.alternatives, 3)
        )

    def maximal(self) -> frozenset:
        """Alternatives that dominate every other alternative."""
        return frozenset(
            a for a in self.alternatives
            if all((a, b) in self.pairs for b in self.alternatives if b != a)
        )

    def restrict(self, subset) -> "DominanceRelation":
        keep = set(subset)
        return DominanceRelation(
            tuple(x for x in self.alternatives if x in keep),
            frozenset((a, b) for a, b in self.pairs if a in keep and b in keep),
            self.kind,
        )

    def classes(self) -> list[list[str]]:
        """Indifference classes, best first; only meaningful for total preorders."""
        remaining = sorted(self.alternatives)
        out = []
        while remaining:
            top = sorted(
                a for a in remaining
                if all((a, b) in self.pairs for b in remaining if b != a)
            )
            if not top:
                raise ProfileError("relation is not a total preorder")
            out.append(top)
            remaining = [x for x in remaining if x not in top]
        return out

    def closure(self) -> "DominanceRelation":
        """Transitive closure; equal to ``self`` when the relation is transitive."""
        reach = _reach(self.alternatives, self.pairs)
        pairs = frozenset((a, b) for a in self.alternatives for b in reach[a] if a != b)
        return DominanceRelation(self.alternatives, pairs, self.kind)

    def adjacency(self) -> str:
        """Deterministic text form: one line per alternative, lexicographic."""
        lines = []
        for a in sorted(self.alternatives):
            succ = sorted(b for b in self.alternatives if b != a and (a, b) in self.pairs)
            lines.append(f"{a}: {' '.join(succ)}".rstrip())
        return "\n".join(lines) + "\n"


def pm_relation(p: Profile) -> DominanceRelation:
    m = p.margins
    pairs = frozenset(
        (a, b) for a, b in permutations(p.alternatives, 2)
        if m.support(a, b) >= m.support(b, a)
    )
    return DominanceRelation(tuple(p.alternatives), pairs, "pm")


def pos_relation(p: Profile) -> DominanceRelation:
    t = p.tally
    pairs = frozenset(
        (a, b) for a, b in permutations(p.alternatives, 2)
        if all(x >= y for x, y in zip(t.row(a), t.row(b)))
    )
    return DominanceRelation(tuple(p.alternatives), pairs, "pos")


def is_total_preorder(r: DominanceRelation) -> bool:
    return r.is_complete() and r.is_transitive()


def _reach(nodes, edges) -> dict[str, set[str]]:
    reach = {a: {b for b in nodes if (a, b) in edges} for a in nodes}
    for k in nodes:
        for a in nodes:
            if k in reach[a]:
                reach[a] |= reach[k]
    return reach


def has_condorcet_cycle(p: Profile) -> bool:
    """Whether strict pairwise majority contains a directed cycle."""
    r = pm_relation(p)
    strict = {(a, b) for a, b in r.pairs if (b, a) not in r.pairs}
    reach = _reach(p.alternatives, strict)
    return any(a in reach[a] for a in p.alternatives)


def schwartz_set(p: Profile) -> frozenset:
    """Top strongly connected component of the weak majority digraph.

    Weak majority is complete, so the condensation is a chain and its source
    is exactly the set of alternatives that reach every other one.
    """
    alts = p.alternatives
    if len(alts) == 1:
        return frozenset(alts)
    reach = _reach(alts, pm_relation(p).pairs)
    return frozenset(a for a in alts if all(b in reach[a] for b in alts if b != a))


def _is_dominant(rel: DominanceRelation, s: frozenset) -> bool:
    outside = [b for b in rel.alternatives if b not in s]
    return not any(rel.holds(b, a) for a in s for b in outside)


def dominant_sets(p: Profile) -> list[frozenset]:
    """Every nonempty subset no inside member of which is weakly beaten from outside."""
    alts = p.alternatives
    if len(alts) > BRUTEFORCE_LIMIT:
        raise ProfileError(f"subset enumeration limited to {BRUTEFORCE_LIMIT} alternatives")
    rel = pm_relation(p)
    return [
        frozenset(s)
        for k in range(1, len(alts) + 1)
        for s in combinations(alts, k)
        if _is_dominant(rel, frozenset(s))
    ]


def schwartz_set_bruteforce(p: Profile) -> frozenset:
    """Smallest subset passing the dominant-set test, by plain enumeration."""
    alts = p.alternatives
    if len(alts) > BRUTEFORCE_LIMIT:
        raise ProfileError(f"subset enumeration limited to {BRUTEFORCE_LIMIT} alternatives")
    rel = pm_relation(p)
    for k in range(1, len(alts) + 1):
        hits = [frozenset(s) for s in combinations(alts, k) if _is_dominant(rel, frozenset(s))]
        if hits:
            if len(hits) > 1:
                raise AssertionError(f"several minimum dominant sets: {hits}")
            return hits[0]
    raise AssertionError("no dominant set found")
