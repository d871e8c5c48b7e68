"""Efficiency, compatibility and stability checks, with exhaustive searches.

A check returns ``None`` when the property holds and a :class:`Violation`
otherwise.  Pairs and subsets are visited in lexicographic order, so the
violation reported is always the first one and replays identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations
from typing import Callable, Iterator

from .dominance import (
    DominanceRelation,
    is_total_preorder,
    pm_relation,
    pos_relation,
)
from .processes import ProcessSpec, process_profile
from .profile import Profile, ProfileError, Ranking, format_weight, restrict
from .rules import Rule

__all__ = [
    "Violation",
    "PROPERTIES",
    "check_pmd_efficiency",
    "check_strong_pmd_efficiency",
    "check_posd_efficiency",
    "check_strong_posd_efficiency",
    "check_property",
    "enumerate_profiles",
    "exhaustive_search",
    "check_stability",
    "stability_search",
    "CompatibilityReport",
    "check_compatibility",
    "TheoremCheck",
    "IncompatibleProcess",
    "dominant_winner_theorem_check",
]

MAX_SEARCH_ALTERNATIVES = 4
MAX_SEARCH_VOTERS = 5


class IncompatibleProcess(ValueError):
    """The process does not meet the compatibility a theorem presupposes."""


def _fmt_set(s) -> str:
    return "{" + ",".join(sorted(s)) + "}"


@dataclass(frozen=True)
class Violation:
    """A counterexample to a property, with enough context to replay it."""

    property: str
    rule: Rule
    witness: tuple
    explanation: dict
    profile: Profile | None = None
    source: object = field(default=None, compare=False)
    alternatives: tuple | None = None

    def replay(self) -> "Violation | None":
        if self.property == "stability":
            return check_stability(
                self.rule, self.source, self.alternatives, [self.witness[1]]
            )
        return check_property(self.property, self.rule, self.profile)

    def to_record(self) -> str:
        """One-line JSON record; keys sorted so output is byte-stable."""
        rec = {
            "property": self.property,
            "rule": self.rule.name,
            "witness": [sorted(x) if isinstance(x, (set, frozenset, tuple, list)) else x
                        for x in self.witness],
            "trace": self.explanation,
        }
        if self.profile is not None:
            rec["profile"] = [f"{format_weight(w)}: {r}" for r, w in self.profile.items()]
        return json.dumps(rec, sort_keys=True)

    def __str__(self) -> str:
        if self.property == "stability":
            big, small = self.witness
            e = self.explanation
            return (f"stability violation for {self.rule.name}: A={_fmt_set(big)}, "
                    f"B={_fmt_set(small)}, f(A)={e['f_A']}, f(B)={e['f_B']}")
        a, b = self.witness
        return (f"{self.property} violation for {self.rule.name}: witness ({a},{b}); "
                f"{self.explanation['fact']}; winners {self.explanation['winners']}")


def _efficiency(name: str, rel_fn: Callable[[Profile], DominanceRelation], strong: bool,
                rule: Rule, p: Profile, literal: bool = False) -> Violation | None:
    shown = rel_fn(p)
    # the strong clauses are read on the transitive closure unless asked otherwise;
    # on total preorders both readings agree
    rel = shown.closure() if strong and not literal else shown
    winners = rule(p)
    sym = rel.kind if rel is shown else rel.kind + "*"
    for a, b in permutations(sorted(p.alternatives), 2):
        if not rel.holds(a, b):
            continue
        back = rel.holds(b, a)
        fact = None
        if not strong:
            if b in winners and a not in winners:
                fact = f"{a} ⊵{sym} {b}, {b} wins, {a} does not"
        elif not back and b in winners:
            fact = f"{a} ⊵{sym} {b} strictly, yet {b} wins"
        elif back and (a in winners) != (b in winners):
            fact = f"{a} and {b} dominate each other, only {a if a in winners else b} wins"
        if fact is not None:
            return Violation(
                name, rule, (a, b),
                {"fact": fact, "winners": _fmt_set(winners),
                 "relation": shown.adjacency().strip().split("\n")},
                profile=p,
            )
    return None


def check_pmd_efficiency(rule: Rule, p: Profile) -> Violation | None:
    return _efficiency("pmd-efficiency", pm_relation, False, rule, p)


def check_strong_pmd_efficiency(rule: Rule, p: Profile, literal: bool = False) -> Violation | None:
    """Strictly dominated alternatives lose; mutually dominating ones tie.

    With ``literal`` the clauses use the weak majority relation itself, which
    no rule can satisfy on a profile with a majority cycle.
    """
    return _efficiency("strong-pmd-efficiency", pm_relation, True, rule, p, literal)


def check_posd_efficiency(rule: Rule, p: Profile) -> Violation | None:
    return _efficiency("posd-efficiency", pos_relation, False, rule, p)


def check_strong_posd_efficiency(rule: Rule, p: Profile, literal: bool = False) -> Violation | None:
    # position dominance is transitive, so ``literal`` changes nothing here
    return _efficiency("strong-posd-efficiency", pos_relation, True, rule, p, literal)


PROPERTIES = {
    "pmd-efficiency": check_pmd_efficiency,
    "strong-pmd-efficiency": check_strong_pmd_efficiency,
    "posd-efficiency": check_posd_efficiency,
    "strong-posd-efficiency": check_strong_posd_efficiency,
}


def check_property(name: str, rule: Rule, p: Profile) -> Violation | None:
    try:
        check = PROPERTIES[name]
    except KeyError:
        raise ProfileError(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}") from None
    return check(rule, p)


def enumerate_profiles(n_alternatives: int, n_voters: int) -> Iterator[Profile]:
    """All unit-weight anonymous profiles with 1..n_voters ballots, in lexicographic order."""
    alts = "abcdefgh"[:n_alternatives]
    rankings = [Ranking(r) for r in permutations(alts)]
    for size in range(1, n_voters + 1):
        for combo in combinations_with_replacement(rankings, size):
            yield Profile([(r, 1) for r in combo], alternatives=alts)


def _check_bounds(n_alternatives: int, n_voters: int) -> None:
    if not 1 <= n_alternatives <= MAX_SEARCH_ALTERNATIVES:
        raise ProfileError(f"exhaustive search needs 1..{MAX_SEARCH_ALTERNATIVES} alternatives")
    if not 1 <= n_voters <= MAX_SEARCH_VOTERS:
        raise ProfileError(f"exhaustive search needs 1..{MAX_SEARCH_VOTERS} voters")


def exhaustive_search(rule: Rule, prop: str, n_alternatives: int, n_voters: int) -> Violation | None:
    """First violation of ``prop`` over the whole small profile space, or None."""
    _check_bounds(n_alternatives, n_voters)
    if prop not in PROPERTIES:
        raise ProfileError(f"unknown property {prop!r}; known: {', '.join(PROPERTIES)}")
    check = PROPERTIES[prop]
    for p in enumerate_profiles(n_alternatives, n_voters):
        v = check(rule, p)
        if v is not None:
            return v
    return None


# -- stability -----------------------------------------------------------------


def _source_profile(source, alternatives, samples: int, seed: int) -> Profile:
    if isinstance(source, Profile):
        return restrict(source, alternatives)
    if isinstance(source, ProcessSpec):
        return process_profile(source, alternatives, samples, seed)
    raise ProfileError(f"cannot build profiles from {type(source).__name__}")


def _subprofile(source, full: Profile, subset) -> Profile:
    # gumbel processes are consistent exactly; everything else marginalizes
    if isinstance(source, ProcessSpec) and source.family == "gumbel":
        return process_profile(source, subset)
    return restrict(full, subset)


def _proper_subsets(alts, sizes=None):
    alts = sorted(alts)
    sizes = sizes or range(1, len(alts))
    for k in sizes:
        yield from (frozenset(s) for s in combinations(alts, k))


def check_stability(rule: Rule, source, alternatives, subsets=None,
                    samples: int = 100_000, seed: int = 0) -> Violation | None:
    """Check f(Π(A)) ∩ B = f(Π(B)) whenever the left side is nonempty.

    ``source`` is a gumbel spec (exact profiles on every subset), another
    spec (sampled once on A, subsets by marginalization) or a fixed profile
    standing for Π(A).  ``subsets`` defaults to every nonempty proper subset.
    """
    alts = tuple(alternatives)
    full = _source_profile(source, alts, samples, seed)
    f_a = rule(full)
    todo = _proper_subsets(alts) if subsets is None else [frozenset(b) for b in subsets]
    for b in todo:
        if not b or not b <= set(alts):
            raise ProfileError(f"subset {_fmt_set(b)} is not a nonempty subset of {_fmt_set(alts)}")
        inter = f_a & b
        if not inter:
            continue
        f_b = rule(_subprofile(source, full, sorted(b)))
        if inter != f_b:
            return Violation(
                "stability", rule, (frozenset(alts), b),
                {"f_A": _fmt_set(f_a), "f_B": _fmt_set(f_b), "f_A_cap_B": _fmt_set(inter)},
                profile=full, source=source, alternatives=alts,
            )
    return None


def stability_search(rule: Rule, n_alternatives: int, n_voters: int) -> Violation | None:
    """First stability violation over fixed profiles, subsets by restriction."""
    _check_bounds(n_alternatives, n_voters)
    for p in enumerate_profiles(n_alternatives, n_voters):
        v = check_stability(rule, p, p.alternatives)
        if v is not None:
            return v
    return None


# -- compatibility ---------------------------------------------------------------


@dataclass(frozen=True)
class CompatibilityReport:
    """Dominance structure of a process over every subset of ``alternatives``.

    ``locally_compatible``: each Π(B) relation is a total preorder.
    ``compatible``: the process relation (dominance in every Π(C) holding both)
    is a total preorder.  ``strongly_compatible``: additionally each Π(B)
    relation equals the process relation restricted to B.
    """

    mode: str
    alternatives: tuple
    locally_compatible: bool
    compatible: bool
    strongly_compatible: bool
    order: list | None
    orders: dict
    failures: list


def _relations(source, alts, rel_fn, samples, seed) -> dict:
    full = _source_profile(source, alts, samples, seed)
    out = {}
    for k in range(2, len(alts) + 1):
        for b in combinations(sorted(alts), k):
            b = frozenset(b)
            prof = full if len(b) == len(alts) else _subprofile(source, full, sorted(b))
            out[b] = rel_fn(prof)
    return out


def _single_mode(mode, source, alts, samples, seed) -> CompatibilityReport:
    rel_fn = pm_relation if mode == "pm" else pos_relation
    rels = _relations(source, alts, rel_fn, samples, seed)
    failures = []
    local = True
    for b, rel in rels.items():
        if not is_total_preorder(rel):
            local = False
            failures.append(f"{_fmt_set(b)}: Π(B) {mode} relation is not a total preorder")
    process_pairs = frozenset(
        (x, y) for x, y in permutations(alts, 2)
        if all(rel.holds(x, y) for b, rel in rels.items() if x in b and y in b)
    )
    process = DominanceRelation(tuple(alts), process_pairs, mode)
    compatible = is_total_preorder(process)
    if not compatible:
        failures.append(f"process {mode} relation is not a total preorder")
    strong = compatible
    for b, rel in rels.items():
        if rel.pairs != process.restrict(b).pairs:
            strong = False
            failures.append(f"{_fmt_set(b)}: Π(B) {mode} relation differs from the process relation")
    orders = {}
    for b, rel in rels.items():
        orders[",".join(sorted(b))] = rel.classes() if is_total_preorder(rel) else None
    return CompatibilityReport(
        mode, tuple(alts), local, compatible, strong and local,
        process.classes() if compatible else None, orders, failures,
    )


def check_compatibility(source, alternatives, mode: str = "pm",
                        samples: int = 100_000, seed: int = 0) -> CompatibilityReport:
    """Compatibility of ``source`` under ``mode`` in {"pm", "pos", "strong"}.

    ``strong`` demands strong compatibility under both relations with the
    same preorder, which is what parameter-ordered utility processes give.
    """
    alts = tuple(alternatives)
    if len(alts) > 5:
        raise ProfileError("compatibility checks enumerate subsets of at most 5 alternatives")
    if mode in ("pm", "pos"):
        return _single_mode(mode, source, alts, samples, seed)
    if mode != "strong":
        raise ProfileError(f"unknown compatibility mode {mode!r}")
    pm = _single_mode("pm", source, alts, samples, seed)
    pos = _single_mode("pos", source, alts, samples, seed)
    failures = [f"pm: {x}" for x in pm.failures] + [f"pos: {x}" for x in pos.failures]
    agree = pm.order is not None and pm.order == pos.order
    if pm.order is not None and pos.order is not None and not agree:
        failures.append("pm and pos preorders differ")
    return CompatibilityReport(
        "strong", alts,
        pm.locally_compatible and pos.locally_compatible,
        pm.compatible and pos.compatible,
        pm.strongly_compatible and pos.strongly_compatible and agree,
        pm.order if agree else None,
        {"pm": pm.orders, "pos": pos.orders}, failures,
    )


@dataclass(frozen=True)
class TheoremCheck:
    rule: str
    mode: str
    passed: bool
    winners: frozenset
    expected: frozenset


def dominant_winner_theorem_check(rule: Rule, source, alternatives, mode: str | None = None,
                                  samples: int = 100_000, seed: int = 0) -> TheoremCheck:
    """Whether f(Π(A)) is exactly the set of alternatives dominating all of A.

    ``mode`` defaults to the dominance the rule is strongly efficient under.
    Raises :class:`IncompatibleProcess` when the process is not compatible in
    that mode, since the equality is only claimed for compatible processes.
    """
    mode = mode or rule.efficiency
    if mode not in ("pm", "pos"):
        raise ProfileError(f"rule {rule.name} has no dominance mode; pass mode='pm' or 'pos'")
    alts = tuple(alternatives)
    report = check_compatibility(source, alts, mode, samples, seed)
    if not report.compatible:
        raise IncompatibleProcess(f"process is not {mode}-compatible: {report.failures}")
    full = _source_profile(source, alts, samples, seed)
    rel = (pm_relation if mode == "pm" else pos_relation)(full)
    if not is_total_preorder(rel):
        raise IncompatibleProcess(f"{mode} relation on Π(A) is not a total preorder")
    expected = rel.maximal()
    winners = rule(full)
    return TheoremCheck(rule.name, mode, winners == expected, winners, expected)
