"""Command-line front end.

Exit codes: 0 success or property holds, 1 violation found, 2 usage or input
error (always a single diagnostic line on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations
from pathlib import Path

from .dominance import pm_dominates, pm_relation, pos_dominates, pos_relation, schwartz_set
from .fixtures import emit_fixtures
from .processes import ProcessSpec, draw_sample, plackett_luce_exact
from .profile import ProfileError, format_weight, parse_profile
from .properties import PROPERTIES, check_property, check_stability, exhaustive_search
from .rules import RULE_NAMES, get_rule


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_set(s) -> str:
    return ", ".join(sorted(s))


def _csv(text: str) -> list[str]:
    items = [x.strip() for x in text.split(",")]
    if not all(items):
        raise UsageError(f"malformed list {text!r}")
    return items


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _profile(path: str):
    return parse_profile(_read(path))


def _spec(path: str) -> ProcessSpec:
    return ProcessSpec.from_json(_read(path))


def _emit(args, text: str, record: dict) -> None:
    if args.format == "records":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def cmd_winners(args) -> int:
    p = _profile(args.profile)
    rule = get_rule(args.rule, args.weights)
    w = rule(p)
    _emit(args, f"winners: {_fmt_set(w)}",
          {"verb": "winners", "rule": args.rule, "winners": sorted(w)})
    return 0


def cmd_dominance(args) -> int:
    p = _profile(args.profile)
    if args.pair:
        pair = _csv(args.pair)
        if len(pair) != 2:
            raise UsageError("--pair needs exactly two alternatives")
        a, b = pair
        check = pm_dominates if args.kind == "pm" else pos_dominates
        held = check(p, a, b)
        _emit(args, f"{a} {args.kind}-dominates {b}: {'yes' if held else 'no'}",
              {"verb": "dominance", "kind": args.kind, "pair": [a, b], "holds": held})
        return 0
    rel = (pm_relation if args.kind == "pm" else pos_relation)(p)
    adj = rel.adjacency()
    _emit(args, adj.rstrip("\n"),
          {"verb": "dominance", "kind": args.kind,
           "relation": {a: sorted(b for b in rel.alternatives if b != a and rel.holds(a, b))
                        for a in sorted(rel.alternatives)}})
    return 0


def cmd_schwartz(args) -> int:
    s = schwartz_set(_profile(args.profile))
    _emit(args, f"schwartz: {_fmt_set(s)}", {"verb": "schwartz", "set": sorted(s)})
    return 0


def cmd_sample(args) -> int:
    spec = _spec(args.process)
    alts = _csv(args.set)
    if args.exact:
        p = plackett_luce_exact(spec, alts)
        tied = 0
    else:
        if args.samples is None or args.seed is None:
            raise UsageError("sampling needs --samples and --seed (or --exact)")
        s = draw_sample(spec, alts, args.samples, args.seed)
        p, tied = s.profile, s.tied
    if args.format == "records":
        print(json.dumps({
            "verb": "sample", "family": spec.family, "exact": bool(args.exact),
            "tied": tied, "profile": [[str(r), format_weight(w)] for r, w in p.items()],
        }, sort_keys=True))
    else:
        sys.stdout.write(p.to_text())
        if not args.exact:
            print(f"# tied draws: {tied}")
    return 0


def cmd_check(args) -> int:
    if args.property not in PROPERTIES:
        raise UsageError(f"unknown property {args.property!r}; known: {', '.join(PROPERTIES)}")
    rule = get_rule(args.rule, args.weights)
    if (args.profile is None) == (args.exhaustive is None):
        raise UsageError("check needs exactly one of --profile and --exhaustive")
    if args.profile is not None:
        v = check_property(args.property, rule, _profile(args.profile))
    else:
        try:
            m, n = (int(x) for x in _csv(args.exhaustive))
        except ValueError:
            raise UsageError("--exhaustive takes m,n") from None
        v = exhaustive_search(rule, args.property, m, n)
    return _report(args, v)


def _report(args, v) -> int:
    if v is None:
        _emit(args, "pass", {"verb": args.verb, "result": "pass"})
        return 0
    if args.format == "records":
        print(v.to_record())
    else:
        print(f"violation: {v}")
    return 1


def cmd_stability(args) -> int:
    rule = get_rule(args.rule, args.weights)
    spec = _spec(args.process)
    alts = _csv(args.set)
    subsets = None
    if args.subsets:
        subsets = [_csv(s) for s in args.subsets.split(";")]
    elif args.sizes:
        sizes = [int(x) for x in _csv(args.sizes)]
        subsets = [c for k in sizes for c in combinations(sorted(alts), k)]
    v = check_stability(rule, spec, alts, subsets, samples=args.samples, seed=args.seed)
    return _report(args, v)


def cmd_fixtures(args) -> int:
    for path in emit_fixtures(args.emit):
        print(path.name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permvote", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("table", "records"), default="table")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("table", "records"), default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    sp = add("winners", cmd_winners, "winner set of a rule on a ballot file")
    sp.add_argument("--rule", required=True, choices=RULE_NAMES)
    sp.add_argument("--weights")
    sp.add_argument("--profile", required=True)

    sp = add("dominance", cmd_dominance, "pairwise-majority or position dominance")
    sp.add_argument("--kind", choices=("pm", "pos"), required=True)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--pair")

    sp = add("schwartz", cmd_schwartz, "Schwartz set of a ballot file")
    sp.add_argument("--profile", required=True)

    sp = add("sample", cmd_sample, "profile induced by a utility process")
    sp.add_argument("--process", required=True)
    sp.add_argument("--set", required=True)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--exact", action="store_true")

    sp = add("check", cmd_check, "efficiency property on a profile or exhaustively")
    sp.add_argument("--property", required=True)
    sp.add_argument("--rule", required=True, choices=RULE_NAMES)
    sp.add_argument("--weights")
    sp.add_argument("--profile")
    sp.add_argument("--exhaustive")

    sp = add("stability", cmd_stability, "stability of a rule on a process")
    sp.add_argument("--rule", required=True, choices=RULE_NAMES)
    sp.add_argument("--weights")
    sp.add_argument("--process", required=True)
    sp.add_argument("--set", required=True)
    sp.add_argument("--subsets", help="semicolon-separated subsets, e.g. 'a,b;a,c'")
    sp.add_argument("--sizes", help="comma-separated subset sizes, e.g. '2,3'")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("fixtures", cmd_fixtures, "write the reference ballot files")
    sp.add_argument("--emit", required=True)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ProfileError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"permvote: error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
