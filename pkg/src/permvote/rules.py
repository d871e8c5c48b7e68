"""Social choice correspondences: profile in, nonempty winner set out.

Every rule returns a ``frozenset`` of alternative ids.  The exhaustive rules
(Kemeny, Young, Dodgson) are brute-force searches sized for desk-scale
instances and refuse larger inputs instead of silently degrading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Sequence

from .dominance import schwartz_set
from .profile import Profile, ProfileError

__all__ = [
    "WeightsVector",
    "NansonRound",
    "Rule",
    "RULE_NAMES",
    "scores",
    "scoring_rule",
    "plurality",
    "antiplurality",
    "borda",
    "black",
    "dodgson",
    "dodgson_scores",
    "young",
    "young_scores",
    "kemeny",
    "kemeny_optimal_rankings",
    "nanson",
    "nanson_trace",
    "minimax",
    "minimax_scores",
    "fishburn",
    "fishburn_dominations",
    "bucklin",
    "bucklin_scores",
    "schwartz_rule",
    "weak_condorcet_winners",
    "get_rule",
]

KEMENY_LIMIT = 8
YOUNG_LIMIT = 8
DODGSON_MAX_ALTERNATIVES = 6
DODGSON_MAX_VOTERS = 8


@dataclass(frozen=True)
class WeightsVector:
    """Positional points, best position first; must be nonincreasing."""

    alpha: tuple

    def __post_init__(self):
        alpha = tuple(Fraction(x) for x in self.alpha)
        if not alpha:
            raise ProfileError("empty weights vector")
        if any(alpha[i] < alpha[i + 1] for i in range(len(alpha) - 1)):
            raise ProfileError(f"weights must be nonincreasing, got {_fmt_alpha(alpha)}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def parse(cls, text: str) -> "WeightsVector":
        try:
            return cls(tuple(Fraction(x.strip()) for x in text.split(",")))
        except (ValueError, ZeroDivisionError):
            raise ProfileError(f"malformed weights {text!r}") from None

    @classmethod
    def borda(cls, m: int) -> "WeightsVector":
        return cls(tuple(range(m, 0, -1)))

    @classmethod
    def plurality(cls, m: int) -> "WeightsVector":
        return cls((1,) + (0,) * (m - 1))

    @classmethod
    def antiplurality(cls, m: int) -> "WeightsVector":
        return cls((1,) * (m - 1) + (0,))

    @property
    def strictly_decreasing(self) -> bool:
        return all(self.alpha[i] > self.alpha[i + 1] for i in range(len(self.alpha) - 1))

    def tail(self, k: int) -> "WeightsVector":
        """The last ``k`` entries; Borda on m truncates to Borda on k."""
        return WeightsVector(self.alpha[len(self.alpha) - k:])

    def __len__(self) -> int:
        return len(self.alpha)

    def __str__(self) -> str:
        return _fmt_alpha(self.alpha)


def _fmt_alpha(alpha) -> str:
    return ",".join(str(x) for x in alpha)


def _argmax(values: dict) -> frozenset:
    best = max(values.values())
    return frozenset(a for a, v in values.items() if v == best)


def _argmin(values: dict) -> frozenset:
    best = min(values.values())
    return frozenset(a for a, v in values.items() if v == best)


def scores(p: Profile, w: WeightsVector) -> dict[str, Fraction]:
    if len(w) != len(p.alternatives):
        raise ProfileError(
            f"weights vector has length {len(w)}, profile has {len(p.alternatives)} alternatives"
        )
    out = {a: Fraction(0) for a in p.alternatives}
    for r, wt in p.items():
        for i, a in enumerate(r):
            out[a] += wt * w.alpha[i]
    return out


def scoring_rule(p: Profile, w: WeightsVector) -> frozenset:
    return _argmax(scores(p, w))


def plurality(p: Profile) -> frozenset:
    return scoring_rule(p, WeightsVector.plurality(len(p.alternatives)))


def antiplurality(p: Profile) -> frozenset:
    return scoring_rule(p, WeightsVector.antiplurality(len(p.alternatives)))


def borda(p: Profile) -> frozenset:
    return scoring_rule(p, WeightsVector.borda(len(p.alternatives)))


def weak_condorcet_winners(p: Profile) -> frozenset:
    """Alternatives that beat or tie every other one; may be empty."""
    m = p.margins
    return frozenset(
        a for a in p.alternatives
        if all(m.margin(a, b) >= 0 for b in p.alternatives if b != a)
    )


def black(p: Profile, w: WeightsVector | None = None) -> frozenset:
    """Weak Condorcet winners if any, otherwise the scoring-rule winners."""
    if w is None:
        w = WeightsVector.borda(len(p.alternatives))
    elif len(w) != len(p.alternatives):
        scores(p, w)  # raises the length mismatch
    wcw = weak_condorcet_winners(p)
    return wcw if wcw else scoring_rule(p, w)


# -- Dodgson -----------------------------------------------------------------


def _dodgson_integer(p: Profile, c: str) -> int:
    m = p.margins
    opponents = [d for d in p.alternatives if d != c]
    # voters that must switch from d>c to c>d before c beats d strictly
    deficit = []
    for d in opponents:
        gap = m.support(d, c) - m.support(c, d)
        deficit.append(int(gap) // 2 + 1 if gap >= 0 else 0)
    if not any(deficit):
        return 0
    idx = {d: i for i, d in enumerate(opponents)}
    ballots = []
    for r, w in p.items():
        pos = r.index(c)
        ballots.extend([tuple(idx[x] for x in reversed(r[:pos]))] * int(w))

    # states: remaining deficits -> cheapest cost; ballots only ever lift c
    states = {tuple(deficit): 0}
    for above in ballots:
        nxt = dict(states)
        for state, cost in states.items():
            cur = list(state)
            for k, d in enumerate(above, 1):
                if cur[d]:
                    cur[d] -= 1
                key = tuple(cur)
                if cost + k < nxt.get(key, cost + k + 1):
                    nxt[key] = cost + k
        states = nxt
    goal = (0,) * len(opponents)
    if goal not in states:
        raise AssertionError(f"Dodgson search found no way to make {c} a Condorcet winner")
    return states[goal]


def _dodgson_fractional(p: Profile, c: str) -> float:
    """Cheapest swap mass letting c beat-or-tie everyone (LP over ballot types)."""
    from scipy.optimize import linprog

    m = p.margins
    total = float(p.total_weight)
    opponents = [d for d in p.alternatives if d != c]
    need = {d: float(m.margin(d, c)) / (2 * total) for d in opponents if m.margin(d, c) > 0}
    if not need:
        return 0.0
    cols, costs = [], []
    bounds_rows = []
    for r, w in p.items():
        pos = r.index(c)
        row = []
        for k in range(1, pos + 1):
            cols.append((frozenset(r[pos - k:pos]), len(bounds_rows)))
            costs.append(float(k))
            row.append(len(cols) - 1)
        bounds_rows.append((row, float(w) / total))
    n = len(cols)
    a_ub, b_ub = [], []
    for row, cap in bounds_rows:
        if row:
            a_ub.append([1.0 if j in row else 0.0 for j in range(n)])
            b_ub.append(cap)
    for d, amount in need.items():
        a_ub.append([-1.0 if d in cols[j][0] else 0.0 for j in range(n)])
        b_ub.append(-amount)
    res = linprog(costs, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    if res.status != 0:
        raise AssertionError(f"Dodgson LP failed for {c}: {res.message}")
    return float(res.fun)


def dodgson_scores(p: Profile) -> dict:
    """Minimum adjacent swaps making each candidate a Condorcet winner.

    Integer-weight profiles are expanded into unit ballots and solved exactly.
    Profiles with fractional weights (exact process profiles) use the LP
    relaxation over ballot masses, normalized by total weight.
    """
    if len(p.alternatives) > DODGSON_MAX_ALTERNATIVES:
        raise ProfileError(f"Dodgson search limited to {DODGSON_MAX_ALTERNATIVES} alternatives")
    if p.has_integer_weights():
        if p.total_weight > DODGSON_MAX_VOTERS:
            raise ProfileError(f"Dodgson search limited to {DODGSON_MAX_VOTERS} voters")
        return {c: _dodgson_integer(p, c) for c in p.alternatives}
    return {c: _dodgson_fractional(p, c) for c in p.alternatives}


def dodgson(p: Profile) -> frozenset:
    sc = dodgson_scores(p)
    if p.has_integer_weights():
        return _argmin(sc)
    best = min(sc.values())
    return frozenset(a for a, v in sc.items() if v <= best + 1e-9)


# -- Young (deleting alternatives) -------------------------------------------


def young_scores(p: Profile) -> dict[str, int]:
    """Fewest other alternatives to delete so the candidate beats all the rest."""
    alts = p.alternatives
    if len(alts) > YOUNG_LIMIT:
        raise ProfileError(f"Young search limited to {YOUNG_LIMIT} alternatives")
    m = p.margins
    out = {}
    for c in alts:
        others = [x for x in alts if x != c]
        for k in range(len(others) + 1):
            if any(
                all(m.margin(c, x) > 0 for x in others if x not in gone)
                for gone in combinations(others, k)
            ):
                out[c] = k
                break
    return out


def young(p: Profile) -> frozenset:
    return _argmin(young_scores(p))


# -- Kemeny ------------------------------------------------------------------


def _kemeny_table(p: Profile):
    alts = p.alternatives
    if len(alts) > KEMENY_LIMIT:
        raise ProfileError(f"Kemeny enumeration limited to {KEMENY_LIMIT} alternatives")
    m = p.margins
    best, optimal = None, []
    for order in permutations(sorted(alts)):
        cost = sum(m.support(order[j], order[i]) for i, j in combinations(range(len(order)), 2))
        if best is None or cost < best:
            best, optimal = cost, [order]
        elif cost == best:
            optimal.append(order)
    return best, optimal


def kemeny_optimal_rankings(p: Profile) -> tuple[Fraction, list[tuple[str, ...]]]:
    """Minimum total disagreement weight and every ranking attaining it."""
    return _kemeny_table(p)


def kemeny(p: Profile) -> frozenset:
    _, optimal = _kemeny_table(p)
    return frozenset(order[0] for order in optimal)


# -- Nanson ------------------------------------------------------------------


@dataclass(frozen=True)
class NansonRound:
    scores: dict
    average: Fraction
    eliminated: frozenset


def nanson_trace(p: Profile, w: WeightsVector | None = None) -> list[NansonRound]:
    """Run Nanson elimination, returning every round.

    Round k scores with the last k entries of ``w`` (Borda by default), so a
    vector given for the full set truncates consistently as the field shrinks.
    """
    if w is None:
        w = WeightsVector.borda(len(p.alternatives))
    if len(w) != len(p.alternatives):
        scores(p, w)
    if not w.strictly_decreasing:
        raise ProfileError("Nanson needs strictly decreasing weights")
    rounds = []
    current = p
    while True:
        sc = scores(current, w.tail(len(current.alternatives)))
        avg = sum(sc.values(), Fraction(0)) / len(sc)
        out = frozenset(a for a, v in sc.items() if v < avg)
        rounds.append(NansonRound(sc, avg, out))
        if not out:
            return rounds
        current = current.restrict([a for a in current.alternatives if a not in out])


def nanson(p: Profile, w: WeightsVector | None = None) -> frozenset:
    last = nanson_trace(p, w)[-1]
    return frozenset(last.scores)


# -- Minimax -----------------------------------------------------------------


def minimax_scores(p: Profile, convention: str = "margin") -> dict[str, Fraction]:
    """Worst pairwise defeat per alternative.

    ``margin``: largest margin(b, a), floored at 0.  ``winning_votes``: largest
    support(b, a) over opponents b that beat a strictly, 0 if none do.
    """
    m = p.margins
    out = {}
    for a in p.alternatives:
        worst = Fraction(0)
        for b in p.alternatives:
            if b == a:
                continue
            if convention == "margin":
                loss = m.margin(b, a)
            elif convention == "winning_votes":
                loss = m.support(b, a) if m.margin(b, a) > 0 else Fraction(0)
            else:
                raise ProfileError(f"unknown minimax convention {convention!r}")
            worst = max(worst, loss)
        out[a] = worst
    return out


def minimax(p: Profile, convention: str = "margin") -> frozenset:
    return _argmin(minimax_scores(p, convention))


# -- Fishburn ----------------------------------------------------------------


def fishburn_dominations(p: Profile) -> set[tuple[str, str]]:
    """Pairs (x, y) with x Fishburn-dominating y.

    x dominates y when everything strictly beating x also beats y, everything
    y beats x also beats, and at least one of the two inclusions is strict.
    """
    m = p.margins
    alts = p.alternatives
    beaten_by = {x: frozenset(z for z in alts if z != x and m.margin(z, x) > 0) for x in alts}
    beats = {x: frozenset(z for z in alts if z != x and m.margin(x, z) > 0) for x in alts}
    out = set()
    for x in alts:
        for y in alts:
            if x == y:
                continue
            if beaten_by[x] <= beaten_by[y] and beats[y] <= beats[x]:
                if beaten_by[x] != beaten_by[y] or beats[y] != beats[x]:
                    out.add((x, y))
    return out


def fishburn(p: Profile) -> frozenset:
    dominated = {y for _, y in fishburn_dominations(p)}
    return frozenset(a for a in p.alternatives if a not in dominated)


# -- Bucklin -----------------------------------------------------------------


def bucklin_scores(p: Profile) -> dict[str, int]:
    """Smallest k with a in the top k of strictly more than half the weight."""
    t = p.tally
    half = p.total_weight / 2
    out = {}
    for a in p.alternatives:
        out[a] = next(j for j, s in enumerate(t.row(a), 1) if s > half)
    return out


def bucklin(p: Profile) -> frozenset:
    return _argmin(bucklin_scores(p))


def schwartz_rule(p: Profile) -> frozenset:
    return schwartz_set(p)


# -- Registry ----------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    """A named correspondence ready to apply to any profile.

    ``efficiency`` names the dominance under which the rule is strongly
    efficient on compatible processes (``"pm"``/``"pos"``) or is None.
    """

    name: str
    func: Callable = field(repr=False, compare=False)
    weights: WeightsVector | None = None
    efficiency: str | None = None

    def __call__(self, p: Profile) -> frozenset:
        return self.func(p)


RULE_NAMES = (
    "plurality", "antiplurality", "borda", "scoring", "black", "dodgson", "young",
    "kemeny", "nanson", "minimax", "fishburn", "bucklin", "schwartz",
)

PM_STRONG_RULES = ("black", "nanson", "dodgson", "young", "minimax", "kemeny", "fishburn", "schwartz")


def _fit(w: WeightsVector, p: Profile) -> WeightsVector:
    # a vector longer than the field is truncated like Nanson does per round
    if len(w) > len(p.alternatives):
        return w.tail(len(p.alternatives))
    return w


def get_rule(name: str, weights: WeightsVector | Sequence | str | None = None,
             convention: str = "margin") -> Rule:
    """Look up a rule by canonical name.

    ``weights`` is required for ``scoring`` and optional for ``black`` and
    ``nanson`` (default Borda).  A vector longer than a profile's alternative
    set is cut to its last entries, so one vector serves every subset.
    """
    if isinstance(weights, str):
        weights = WeightsVector.parse(weights)
    elif weights is not None and not isinstance(weights, WeightsVector):
        weights = WeightsVector(tuple(weights))

    if name == "plurality":
        return Rule(name, plurality)
    if name == "antiplurality":
        return Rule(name, antiplurality)
    if name == "borda":
        return Rule(name, borda, efficiency="pos")
    if name == "scoring":
        if weights is None:
            raise ProfileError("the scoring rule needs --weights")
        w = weights
        return Rule(name, lambda p: scoring_rule(p, _fit(w, p)), w,
                    "pos" if w.strictly_decreasing else None)
    if name == "black":
        w = weights
        return Rule(name, lambda p: black(p, None if w is None else _fit(w, p)), w, "pm")
    if name == "nanson":
        w = weights
        return Rule(name, lambda p: nanson(p, None if w is None else _fit(w, p)), w, "pm")
    if name == "minimax":
        return Rule(name if convention == "margin" else f"minimax[{convention}]",
                    lambda p: minimax(p, convention), efficiency="pm")
    simple = {
        "dodgson": dodgson, "young": young, "kemeny": kemeny,
        "fishburn": fishburn, "schwartz": schwartz_rule,
    }
    if name in simple:
        return Rule(name, simple[name], efficiency="pm")
    if name == "bucklin":
        return Rule(name, bucklin)
    raise ProfileError(f"unknown rule {name!r}; known: {', '.join(RULE_NAMES)}")
