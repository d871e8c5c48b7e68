"""Random-utility permutation processes.

A :class:`ProcessSpec` names one of eight exponential-family utility
configurations and gives each alternative its parameter.  Sorting one draw of
independent utilities gives a ranking. Gumbel utilities give Plackett-Luce
rankings, which are computed exactly; every family can be sampled.

Sampling uses numpy's PCG64 seeded through ``SeedSequence((seed, id_hash))``
where ``id_hash`` is a BLAKE2b digest of the alternative id.  Each
alternative therefore owns an independent stream, and sample ``i`` is the
``i``-th draw of that stream: adding an alternative never changes anyone
else's utilities, and chunked generation matches sequential generation.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Mapping

import numpy as np

from .dominance import pm_dominates, pos_dominates
from .profile import Profile, ProfileError, Ranking

__all__ = [
    "FAMILIES",
    "ProcessSpec",
    "UtilitySample",
    "Sample",
    "DominanceReport",
    "plackett_luce_exact",
    "draw_sample",
    "sample_profile",
    "iter_utility_samples",
    "param_dominates",
    "log_density",
    "density_swap_check",
    "process_dominance_in_profiles",
    "process_profile",
]

FAMILIES = (
    "normal", "gumbel", "poisson", "gamma_fixed_shape", "binomial_fixed_n",
    "binomial_fixed_p", "negbinomial_fixed_r", "negbinomial_fixed_p",
)

# shared hyperparameter per family; None means the caller must supply it
_SHARED = {
    "normal": {"variance": 0.5},
    "gumbel": {"scale": 1.0},
    "poisson": {},
    "gamma_fixed_shape": {"shape": None},
    "binomial_fixed_n": {"n": None},
    "binomial_fixed_p": {"p": None},
    "negbinomial_fixed_r": {"r": None},
    "negbinomial_fixed_p": {"p": None},
}

DISCRETE = frozenset({
    "poisson", "binomial_fixed_n", "binomial_fixed_p",
    "negbinomial_fixed_r", "negbinomial_fixed_p",
})

PL_EXACT_LIMIT = 7


def _check_prob(name, x, family):
    if not 0 < x < 1:
        raise ProfileError(f"{family}: {name} must lie in (0, 1), got {x}")


def _check_positive(name, x, family):
    if not x > 0 or not math.isfinite(x):
        raise ProfileError(f"{family}: {name} must be positive, got {x}")


def _check_count(name, x, family):
    if x != int(x) or x < 1:
        raise ProfileError(f"{family}: {name} must be a positive integer, got {x}")


@dataclass(frozen=True)
class ProcessSpec:
    """A utility family, its shared hyperparameters and per-alternative parameters."""

    family: str
    params: Mapping[str, float]
    shared: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ProfileError(f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")
        shared = dict(_SHARED[self.family])
        for k, v in dict(self.shared).items():
            if k not in shared:
                raise ProfileError(f"{self.family}: unexpected shared parameter {k!r}")
            shared[k] = v
        for k, v in shared.items():
            if v is None:
                raise ProfileError(f"{self.family}: shared parameter {k!r} is required")
        object.__setattr__(self, "shared", shared)
        object.__setattr__(self, "params", dict(self.params))
        fam = self.family
        for k, v in shared.items():
            if k in ("variance", "scale", "shape"):
                _check_positive(k, v, fam)
            elif k == "p":
                _check_prob(k, v, fam)
            elif k == "n":
                _check_count(k, v, fam)
            elif k == "r":
                _check_positive(k, v, fam)
        for a, v in self.params.items():
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ProfileError(f"{fam}: parameter of {a!r} must be a finite number")
            if fam in ("poisson", "gamma_fixed_shape", "negbinomial_fixed_p"):
                _check_positive(f"parameter of {a!r}", v, fam)
            elif fam in ("binomial_fixed_n", "negbinomial_fixed_r"):
                _check_prob(f"parameter of {a!r}", v, fam)
            elif fam == "binomial_fixed_p":
                _check_count(f"parameter of {a!r}", v, fam)

    def param(self, a: str) -> float:
        try:
            return self.params[a]
        except KeyError:
            raise ProfileError(f"{self.family}: no parameter for alternative {a!r}") from None

    def to_json(self) -> str:
        return json.dumps(
            {"family": self.family, "shared": dict(self.shared), "params": dict(self.params)}
        )

    @classmethod
    def from_json(cls, text: str) -> "ProcessSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProfileError(f"malformed process spec: {exc}") from None
        if not isinstance(data, dict) or "family" not in data or "params" not in data:
            raise ProfileError("process spec needs 'family' and 'params'")
        return cls(data["family"], data["params"], data.get("shared", {}))


# -- exact Plackett-Luce -------------------------------------------------------


def plackett_luce_exact(spec: ProcessSpec, alternatives) -> Profile:
    """Exact ranking distribution of Gumbel utilities over ``alternatives``.

    Strengths ``exp(mu / scale)`` are evaluated in floating point once and
    promoted to exact rationals; the sequential-choice products are exact.
    """
    if spec.family != "gumbel":
        raise ProfileError(f"exact profiles need the gumbel family, not {spec.family}")
    alts = list(alternatives)
    if not alts:
        raise ProfileError("empty alternative set")
    if len(alts) > PL_EXACT_LIMIT:
        raise ProfileError(f"exact Plackett-Luce limited to {PL_EXACT_LIMIT} alternatives")
    scale = spec.shared["scale"]
    v = {a: Fraction(math.exp(spec.param(a) / scale)) for a in alts}
    entries = []
    for order in permutations(sorted(alts)):
        prob = Fraction(1)
        rest = sum(v.values(), Fraction(0))
        for x in order:
            prob *= v[x] / rest
            rest -= v[x]
        entries.append((Ranking(order), prob))
    return Profile(entries, alternatives=alts)


# -- sampling -----------------------------------------------------------------


def _stream(seed: int, a: str) -> np.random.Generator:
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ProfileError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    digest = hashlib.blake2b(a.encode("utf-8"), digest_size=8).digest()
    ss = np.random.SeedSequence([seed, int.from_bytes(digest, "little")])
    return np.random.Generator(np.random.PCG64(ss))


def _draw(spec: ProcessSpec, a: str, rng: np.random.Generator, size: int) -> np.ndarray:
    fam, sh, x = spec.family, spec.shared, spec.param(a)
    if fam == "normal":
        return rng.normal(x, math.sqrt(sh["variance"]), size)
    if fam == "gumbel":
        return rng.gumbel(x, sh["scale"], size)
    if fam == "poisson":
        return rng.poisson(x, size)
    if fam == "gamma_fixed_shape":
        return rng.gamma(sh["shape"], 1.0 / x, size)
    if fam == "binomial_fixed_n":
        return rng.binomial(int(sh["n"]), x, size)
    if fam == "binomial_fixed_p":
        return rng.binomial(int(x), sh["p"], size)
    if fam == "negbinomial_fixed_r":
        return rng.negative_binomial(sh["r"], x, size)
    return rng.negative_binomial(x, sh["p"], size)


def _utilities(spec: ProcessSpec, alts: list[str], samples: int, seed: int) -> np.ndarray:
    if samples < 1:
        raise ProfileError("samples must be at least 1")
    cols = [_draw(spec, a, _stream(seed, a), samples).astype(np.float64) for a in alts]
    return np.column_stack(cols)


@dataclass(frozen=True)
class UtilitySample:
    values: dict
    ranking: Ranking


@dataclass(frozen=True)
class Sample:
    """An empirical profile plus how many draws needed the tie-break."""

    profile: Profile
    samples: int
    tied: int

    @property
    def tie_fraction(self) -> float:
        return self.tied / self.samples


def _sorted_orders(u: np.ndarray):
    # stable sort over lexicographically ordered columns: ties go to the smaller id
    order = np.argsort(-u, axis=1, kind="stable")
    ranked = np.take_along_axis(u, order, axis=1)
    tied = np.any(ranked[:, 1:] == ranked[:, :-1], axis=1) if u.shape[1] > 1 else np.zeros(len(u), bool)
    return order, tied


def iter_utility_samples(spec: ProcessSpec, alternatives, samples: int, seed: int) -> Iterator[UtilitySample]:
    alts = sorted(alternatives)
    u = _utilities(spec, alts, samples, seed)
    order, _ = _sorted_orders(u)
    for i in range(samples):
        yield UtilitySample(
            {a: float(u[i, j]) for j, a in enumerate(alts)},
            Ranking(alts[j] for j in order[i]),
        )


def draw_sample(spec: ProcessSpec, alternatives, samples: int, seed: int) -> Sample:
    """Sample ``samples`` utility vectors and tally the induced rankings."""
    given = list(alternatives)
    if not given:
        raise ProfileError("empty alternative set")
    alts = sorted(given)
    u = _utilities(spec, alts, samples, seed)
    order, tied = _sorted_orders(u)
    rows, counts = np.unique(order, axis=0, return_counts=True)
    entries = [(Ranking(alts[j] for j in row), int(c)) for row, c in zip(rows, counts)]
    return Sample(Profile(entries, alternatives=given), samples, int(tied.sum()))


def sample_profile(spec: ProcessSpec, alternatives, samples: int, seed: int) -> Profile:
    return draw_sample(spec, alternatives, samples, seed).profile


def process_profile(spec: ProcessSpec, alternatives, samples: int = 100_000, seed: int = 0) -> Profile:
    """Exact profile for gumbel specs, seeded empirical profile otherwise."""
    if spec.family == "gumbel":
        return plackett_luce_exact(spec, alternatives)
    return sample_profile(spec, alternatives, samples, seed)


# -- parameter dominance and its density witness --------------------------------


def param_dominates(spec: ProcessSpec, a: str, b: str) -> bool:
    """Weak dominance of a over b read off the family parameters."""
    x, y = spec.param(a), spec.param(b)
    if spec.family in ("gamma_fixed_shape", "negbinomial_fixed_r"):
        return y >= x
    return x >= y


def log_density(spec: ProcessSpec, a: str, u: float) -> float:
    """Closed-form log density (or log pmf) of a's utility at ``u``."""
    fam, sh, x = spec.family, spec.shared, spec.param(a)
    if fam == "normal":
        var = sh["variance"]
        return -((u - x) ** 2) / (2 * var) - 0.5 * math.log(2 * math.pi * var)
    if fam == "gumbel":
        z = (u - x) / sh["scale"]
        return -math.log(sh["scale"]) - z - math.exp(-z)
    if fam == "gamma_fixed_shape":
        r = sh["shape"]
        return r * math.log(x) + (r - 1) * math.log(u) - x * u - math.lgamma(r)
    k = int(u)
    if fam == "poisson":
        return k * math.log(x) - x - math.lgamma(k + 1)
    if fam in ("binomial_fixed_n", "binomial_fixed_p"):
        n, p = (int(sh["n"]), x) if fam == "binomial_fixed_n" else (int(x), sh["p"])
        if k > n:
            return -math.inf
        return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
                + k * math.log(p) + (n - k) * math.log1p(-p))
    r, p = (sh["r"], x) if fam == "negbinomial_fixed_r" else (x, sh["p"])
    return (math.lgamma(k + r) - math.lgamma(r) - math.lgamma(k + 1)
            + r * math.log(p) + k * math.log1p(-p))


def _check_support(spec: ProcessSpec, a: str, b: str, u: float) -> None:
    fam = spec.family
    if fam in DISCRETE:
        if u != int(u) or u < 0:
            raise ProfileError(f"{fam}: grid point {u} outside the support")
        if fam == "binomial_fixed_n" and u > spec.shared["n"]:
            raise ProfileError(f"{fam}: grid point {u} outside the support")
        if fam == "binomial_fixed_p" and u > max(spec.param(a), spec.param(b)):
            raise ProfileError(f"{fam}: grid point {u} outside the support")
    elif fam == "gamma_fixed_shape" and u <= 0:
        raise ProfileError(f"{fam}: grid point {u} outside the support")
    elif not math.isfinite(u):
        raise ProfileError(f"{fam}: grid point {u} is not finite")


def density_swap_check(spec: ProcessSpec, a: str, b: str, grid) -> bool:
    """Whether f_a(u1) f_b(u2) >= f_a(u2) f_b(u1) at every grid pair u1 >= u2."""
    for u1, u2 in grid:
        if u1 < u2:
            raise ProfileError(f"grid pair ({u1}, {u2}) needs u1 >= u2")
        _check_support(spec, a, b, u1)
        _check_support(spec, a, b, u2)
        lhs = log_density(spec, a, u1) + log_density(spec, b, u2)
        rhs = log_density(spec, a, u2) + log_density(spec, b, u1)
        if rhs == -math.inf:
            continue
        if lhs == -math.inf:
            return False
        if lhs < rhs - 1e-12 * max(1.0, abs(rhs)):
            return False
    return True


# -- dominance on induced profiles --------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    """Outcome of checking that parameter dominance shows up in a profile.

    ``inconclusive`` flags sampled runs whose PM margin or some positional
    cutoff difference sits within three standard errors of zero.
    """

    a: str
    b: str
    exact: bool
    vacuous: bool = False
    pm: bool | None = None
    pos: bool | None = None
    pm_margin_z: float | None = None
    tie_fraction: float = 0.0
    inconclusive: bool = False


def _pos_cutoff_z(p: Profile, a: str, b: str) -> float:
    """Smallest z-score over cutoffs where the positional tallies differ."""
    n = float(p.total_weight)
    worst = math.inf
    for j in range(1, len(p.alternatives)):
        diff = sq = 0.0
        for r, w in p.items():
            d = (r.position(a) <= j) - (r.position(b) <= j)
            diff += float(w) * d
            sq += float(w) * d * d
        var = sq - diff * diff / n
        if var > 0:
            worst = min(worst, diff / math.sqrt(var))
    return worst


def process_dominance_in_profiles(spec: ProcessSpec, alternatives, a: str, b: str,
                                  samples: int = 100_000, seed: int = 0) -> DominanceReport:
    alts = list(alternatives)
    if a not in alts or b not in alts or a == b:
        return DominanceReport(a, b, exact=spec.family == "gumbel", vacuous=True)
    if not param_dominates(spec, a, b) or param_dominates(spec, b, a):
        raise ProfileError(f"{a} must strictly dominate {b} by parameter")
    if spec.family == "gumbel":
        p = plackett_luce_exact(spec, alts)
        return DominanceReport(a, b, exact=True, pm=pm_dominates(p, a, b), pos=pos_dominates(p, a, b))
    s = draw_sample(spec, alts, samples, seed)
    p = s.profile
    n = float(p.total_weight)
    d = float(p.margins.margin(a, b))
    var = n - d * d / n
    z = d / math.sqrt(var) if var > 0 else math.copysign(math.inf, d)
    zpos = _pos_cutoff_z(p, a, b)
    return DominanceReport(
        a, b, exact=False,
        pm=pm_dominates(p, a, b), pos=pos_dominates(p, a, b),
        pm_margin_z=z, tie_fraction=s.tie_fraction,
        inconclusive=abs(z) < 3 or abs(zpos) < 3,
    )
