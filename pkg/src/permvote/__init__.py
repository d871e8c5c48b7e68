"""Voting rules, dominance relations and axiom checks for permutation processes."""

from .dominance import (
    DominanceRelation,
    has_condorcet_cycle,
    is_total_preorder,
    pm_dominates,
    pm_relation,
    pos_dominates,
    pos_relation,
    schwartz_set,
    schwartz_set_bruteforce,
)
from .fixtures import load_fixture
from .processes import (
    ProcessSpec,
    density_swap_check,
    param_dominates,
    plackett_luce_exact,
    process_dominance_in_profiles,
    sample_profile,
)
from .profile import (
    MarginMatrix,
    PositionalTally,
    Profile,
    ProfileError,
    Ranking,
    margins,
    parse_profile,
    positional_tally,
    restrict,
)
from .properties import (
    Violation,
    check_compatibility,
    check_pmd_efficiency,
    check_posd_efficiency,
    check_stability,
    check_strong_pmd_efficiency,
    check_strong_posd_efficiency,
    dominant_winner_theorem_check,
    exhaustive_search,
)
from .rules import RULE_NAMES, Rule, WeightsVector, get_rule

__version__ = "0.1.0"
