import random
from itertools import combinations

import pytest
from hypothesis import given, settings

from conftest import GOLDEN, profiles
from permvote.dominance import pm_relation, pos_relation
from permvote.fixtures import FIXTURES, load_fixture
from permvote.processes import ProcessSpec
from permvote.profile import Profile, ProfileError, Ranking, parse_profile
from permvote.properties import (
    PROPERTIES,
    IncompatibleProcess,
    check_compatibility,
    check_pmd_efficiency,
    check_posd_efficiency,
    check_property,
    check_stability,
    check_strong_pmd_efficiency,
    check_strong_posd_efficiency,
    dominant_winner_theorem_check,
    enumerate_profiles,
    exhaustive_search,
    stability_search,
)
from permvote.rules import PM_STRONG_RULES, RULE_NAMES, get_rule

BORDA5 = "5,4,3,2,1"

REGRESSION_CASES = [
    ("black", "P1", BORDA5, "margin"),
    ("dodgson", "P1", None, "margin"),
    ("young", "P1", None, "margin"),
    ("kemeny", "P1", None, "margin"),
    ("nanson", "P2", BORDA5, "margin"),
    ("minimax", "P3", None, "margin"),
    ("minimax", "P3", None, "winning_votes"),
    ("fishburn", "P4", None, "margin"),
]


def _rule(name, weights=None, convention="margin"):
    return get_rule(name, weights, convention)


@pytest.mark.parametrize("name,fixture,weights,conv", REGRESSION_CASES)
def test_regression_records_match_golden(name, fixture, weights, conv):
    golden = (GOLDEN / "regression_violations.jsonl").read_text(encoding="utf-8").splitlines()
    v = check_pmd_efficiency(_rule(name, weights, conv), load_fixture(fixture))
    assert v is not None
    assert v.to_record() == golden[REGRESSION_CASES.index((name, fixture, weights, conv))]


@pytest.mark.parametrize("name,fixture,weights,conv",
                         [c for c in REGRESSION_CASES if c[0] != "kemeny"])
def test_regression_witness_is_a_b(name, fixture, weights, conv):
    v = check_pmd_efficiency(_rule(name, weights, conv), load_fixture(fixture))
    assert v.witness == ("a", "b")
    assert "b" in v.explanation["winners"] and "a" not in v.explanation["winners"]


def test_kemeny_p1_violation_has_other_witness():
    # both a and b are Kemeny winners on P1, so (a,b) cannot be the witness
    v = check_pmd_efficiency(_rule("kemeny"), load_fixture("P1"))
    assert v.witness == ("d", "a")


def test_schwartz_passes_every_fixture(any_fixture):
    p = any_fixture
    rule = _rule("schwartz")
    assert check_pmd_efficiency(rule, p) is None
    assert check_strong_pmd_efficiency(rule, p) is None


def test_plurality_symmetric_tie():
    p = parse_profile("1: a>b\n1: b>a\n")
    assert check_pmd_efficiency(_rule("plurality"), p) is None


def test_strong_schwartz_on_cycle():
    assert check_strong_pmd_efficiency(_rule("schwartz"), load_fixture("C3")) is None
    # read literally, every alternative of a cycle is strictly beaten by another
    v = check_strong_pmd_efficiency(_rule("schwartz"), load_fixture("C3"), literal=True)
    assert v is not None and v.witness == ("a", "b")


def test_strong_borda_on_p1():
    v = check_strong_pmd_efficiency(_rule("borda"), load_fixture("P1"))
    assert v is not None and v.witness == ("a", "b")
    assert v.explanation["winners"] == "{b}"


@pytest.mark.parametrize("name", RULE_NAMES)
def test_single_alternative_passes(name):
    p = Profile([(Ranking(("a",)), 1)])
    rule = get_rule(name, "1" if name == "scoring" else None)
    for prop in PROPERTIES:
        assert check_property(prop, rule, p) is None


def test_bucklin_p5_strong_posd():
    p = load_fixture("P5")
    rule = _rule("bucklin")
    assert rule(p) == {"a", "b"}
    v = check_strong_posd_efficiency(rule, p)
    assert v.witness == ("a", "b")
    assert pos_relation(p).strictly("a", "b")
    assert check_posd_efficiency(rule, p) is None


def test_enumerate_profiles_counts():
    # multisets of size 1..n over m! rankings
    from math import comb
    for m, n in [(2, 3), (3, 4), (4, 2)]:
        k = {2: 2, 3: 6, 4: 24}[m]
        expected = sum(comb(k + s - 1, s) for s in range(1, n + 1))
        assert sum(1 for _ in enumerate_profiles(m, n)) == expected


def test_exhaustive_bounds_and_unknown_property():
    with pytest.raises(ProfileError):
        exhaustive_search(_rule("borda"), "pmd-efficiency", 5, 2)
    with pytest.raises(ProfileError):
        exhaustive_search(_rule("borda"), "pmd-efficiency", 3, 6)
    with pytest.raises(ProfileError):
        exhaustive_search(_rule("borda"), "fairness", 3, 2)
    with pytest.raises(ProfileError):
        check_property("fairness", _rule("borda"), load_fixture("C3"))


def test_exhaustive_minimax_finds_violation():
    v = exhaustive_search(_rule("minimax"), "pmd-efficiency", 4, 5)
    assert v is not None and v.replay() == v


@pytest.mark.parametrize("name,prop", [
    ("schwartz", "pmd-efficiency"),
    ("schwartz", "strong-pmd-efficiency"),
    ("bucklin", "posd-efficiency"),
    ("plurality", "posd-efficiency"),
    ("antiplurality", "posd-efficiency"),
    ("borda", "posd-efficiency"),
    ("borda", "strong-posd-efficiency"),
])
def test_exhaustive_passes(name, prop):
    assert exhaustive_search(_rule(name), prop, 3, 4) is None


def test_exhaustive_plurality_3_3():
    assert exhaustive_search(_rule("plurality"), "posd-efficiency", 3, 3) is None


def test_weak_scoring_not_strong():
    # plurality ties positional-dominated alternatives with dominating ones
    assert exhaustive_search(_rule("plurality"), "strong-posd-efficiency", 3, 4) is not None


def test_violations_replay_identically():
    found = []
    for name, fixture, weights, conv in REGRESSION_CASES:
        found.append(check_pmd_efficiency(_rule(name, weights, conv), load_fixture(fixture)))
    found.append(check_strong_posd_efficiency(_rule("bucklin"), load_fixture("P5")))
    found.append(stability_search(_rule("plurality"), 3, 4))
    for v in found:
        again = v.replay()
        assert again == v and again.to_record() == v.to_record()


@settings(max_examples=150, deadline=None)
@given(profiles(max_alts=4, max_ballots=5))
def test_strong_implies_weak(p):
    for name in ("borda", "plurality", "bucklin", "black", "minimax", "schwartz", "nanson"):
        rule = _rule(name)
        if check_strong_pmd_efficiency(rule, p) is None:
            assert check_pmd_efficiency(rule, p) is None
        if check_strong_posd_efficiency(rule, p) is None:
            assert check_posd_efficiency(rule, p) is None


# -- stability --------------------------------------------------------------------


def _gumbel(values):
    return ProcessSpec("gumbel", dict(zip("abcde", values)))


def test_stability_borda_and_schwartz_gumbel():
    spec = _gumbel([1.2, 0.6, 0.1, -0.7])
    subsets = [c for k in (2, 3) for c in combinations("abcd", k)]
    for name in ("borda", "schwartz"):
        assert check_stability(_rule(name), spec, "abcd", subsets) is None


def test_stability_plurality_search():
    v = stability_search(_rule("plurality"), 3, 4)
    assert v is not None
    big, small = v.witness
    assert big == frozenset("abc") and small == frozenset("ac")
    assert v.explanation["f_A"] == "{a,b}" and v.explanation["f_B"] == "{a,c}"
    assert str(v).startswith("stability violation for plurality")


def test_stability_subset_errors():
    with pytest.raises(ProfileError):
        check_stability(_rule("borda"), load_fixture("C3"), "abc", [("a", "z")])
    with pytest.raises(ProfileError):
        check_stability(_rule("borda"), "not a source", "abc")


def test_stability_sampled_uses_restriction():
    spec = ProcessSpec("normal", {"a": 1.5, "b": 0.8, "c": 0.0, "d": -0.5})
    assert check_stability(_rule("borda"), spec, "abcd", samples=20_000, seed=4) is None


# -- compatibility ---------------------------------------------------------------


def test_gumbel_strong_compatible():
    rep = check_compatibility(_gumbel([3, 2, 1]), "abc", "strong")
    assert rep.strongly_compatible and rep.compatible and rep.locally_compatible
    assert rep.order == [["a"], ["b"], ["c"]]


def test_e2_pos_not_strongly_compatible():
    rep = check_compatibility(load_fixture("E2"), "abc", "pos")
    assert rep.locally_compatible and rep.compatible
    assert not rep.strongly_compatible
    assert rep.orders["a,b,c"] == [["b"], ["a"], ["c"]]
    assert rep.orders["a,b"] == [["a", "b"]]


def test_e3_pm_and_pos_orders():
    rep = check_compatibility(load_fixture("E3"), "abc", "strong")
    assert rep.orders["pm"]["a,b,c"] == [["a"], ["b"], ["c"]]
    assert rep.orders["pos"]["a,b,c"] == [["b"], ["a"], ["c"]]
    assert not rep.strongly_compatible
    assert any(f.startswith("pos: ") for f in rep.failures)


def test_compatibility_errors():
    with pytest.raises(ProfileError):
        check_compatibility(_gumbel([1, 2, 3]), "abcdef")
    with pytest.raises(ProfileError):
        check_compatibility(_gumbel([1, 2, 3]), "abc", "fuzzy")


def test_cycle_is_not_pm_compatible():
    rep = check_compatibility(load_fixture("C3"), "abc", "pm")
    assert not rep.locally_compatible and not rep.compatible
    with pytest.raises(IncompatibleProcess):
        dominant_winner_theorem_check(_rule("black"), load_fixture("C3"), "abc")


# -- dominant winner theorem -----------------------------------------------------


def test_theorem_kemeny():
    t = dominant_winner_theorem_check(_rule("kemeny"), _gumbel([2, 1, 0]), "abc")
    assert t.passed and t.winners == {"a"} and t.mode == "pm"


def test_theorem_borda_tie():
    t = dominant_winner_theorem_check(_rule("borda"), _gumbel([1, 1, 0]), "abc")
    assert t.passed and t.winners == {"a", "b"} and t.mode == "pos"


def test_theorem_needs_mode_for_plurality():
    with pytest.raises(ProfileError):
        dominant_winner_theorem_check(_rule("plurality"), _gumbel([2, 1, 0]), "abc")
    t = dominant_winner_theorem_check(_rule("plurality"), _gumbel([2, 1, 0]), "abc", mode="pos")
    assert t.passed


def test_theorem_cross_rule_equality():
    spec = _gumbel([0.9, 0.9, 0.2, -0.4])
    results = {name: dominant_winner_theorem_check(_rule(name), spec, "abcd") for name in PM_STRONG_RULES}
    assert all(t.passed for t in results.values())
    assert len({t.winners for t in results.values()}) == 1
    assert results["black"].winners == {"a", "b"}


@pytest.mark.slow
def test_stability_on_random_gumbel_specs():
    rng = random.Random(2024)
    strong = [*PM_STRONG_RULES, "borda"]
    for _ in range(100):
        m = rng.choice((4, 5))
        values = sorted((rng.uniform(-2, 2) for _ in range(m)), reverse=True)
        spec = _gumbel(values)
        for name in strong:
            assert check_stability(_rule(name), spec, "abcde"[:m]) is None, (name, values)
