"""Command-line front end.

Exit codes: 0 the language is empty (or the command succeeded for
non-verdict commands), 10 nonempty, 2 parse/validation/unsupported-input
errors, 3 abstraction budget exceeded, 1 failed analysis suites.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .analysis import run_suites
from .core import Automaton, is_nrtta, parse_rational, validate
from .errors import (
    MalformedWord,
    NotOneParameter,
    ParseError,
    PntaError,
    PreconditionViolated,
    RegionBudgetExceeded,
    UnsupportedAutomaton,
)
from .parametric import (
    DEFAULT_REGION_BUDGET,
    Verdict,
    candidate_parameters,
    emptiness_fixed,
    parametric_emptiness,
    prepare_fixed,
    witness_word,
)
from .regions import SymbolicLasso, build_region_automaton, find_lasso, region_str, to_dot
from .semantics import run_frontiers
from .textio import format_timed_word, parse_automaton, parse_timed_word, print_automaton
from .translate import ta_to_nrtta

EXIT_EMPTY = 0
EXIT_NONEMPTY = 10
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3
EXIT_SUITE_FAILURE = 1


@dataclass
class Report:
    verdict: str
    witness_mu: Optional[str]
    candidates_checked: int
    region_nodes: int
    lasso: Optional[dict]
    timings: dict

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def _load_automaton(path: str) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        a = parse_automaton(fh.read())
    errs = validate(a)
    if errs:
        raise PreconditionViolated(
            "; ".join(str(e) for e in errs) or "invalid automaton"
        )
    return a


def _lasso_dict(lasso: Optional[SymbolicLasso]) -> Optional[dict]:
    if lasso is None:
        return None

    def fmt(nodes):
        return [f"{q} | {region_str(reg)}" for q, reg in nodes]

    return {"stem": fmt(lasso.stem_nodes), "cycle": fmt(lasso.cycle_nodes)}


def _mu_str(mu: Optional[Fraction]) -> Optional[str]:
    if mu is None:
        return None
    return f"{mu.numerator}/{mu.denominator}" if mu.denominator != 1 else str(mu.numerator)


def _candidate_verdict(payload) -> tuple[str, bool, int]:
    a, value, max_nodes = payload
    v = emptiness_fixed(a, value, max_nodes, include_lasso=False)
    return str(value), v.nonempty, v.region_nodes


def _parallel_parametric(a: Automaton, max_nodes: int, jobs: int) -> Verdict:
    cs = candidate_parameters(a)
    payloads = [(a, cand.value, max_nodes) for cand in cs.candidates]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_candidate_verdict, payloads))
    total_nodes = sum(nodes for _, _, nodes in results)
    for cand, (_, nonempty, _) in zip(cs.candidates, results):
        if nonempty:
            v = emptiness_fixed(a, cand.value, max_nodes)
            return Verdict(
                True, cand.value, v.lasso, v.scaled_by, v.m,
                len(cs.candidates), total_nodes,
            )
    return Verdict(False, None, None, 1, 0, len(cs.candidates), total_nodes)


def cmd_check(args) -> int:
    a = _load_automaton(args.file)
    if args.auto_translate and not is_nrtta(a):
        a = ta_to_nrtta(a)
    t0 = time.perf_counter()
    if args.mu is not None:
        verdict = emptiness_fixed(a, parse_rational(args.mu), args.max_regions)
    elif not a.params:
        verdict = emptiness_fixed(a, None, args.max_regions)
    elif args.jobs and args.jobs > 1:
        b = a if is_nrtta(a) else ta_to_nrtta(a)
        if len(b.clocks) > 2:
            raise UnsupportedAutomaton(f"at most two clocks supported, got {len(b.clocks)}")
        verdict = _parallel_parametric(b, args.max_regions, args.jobs)
    else:
        verdict = parametric_emptiness(a, args.max_regions)
    wall_ms = round((time.perf_counter() - t0) * 1000)

    word_text = None
    if args.witness and verdict.nonempty and verdict.lasso is not None:
        word_text = format_timed_word(witness_word(a, verdict, args.unrollings))

    report = Report(
        "Nonempty" if verdict.nonempty else "Empty",
        _mu_str(verdict.witness_mu),
        verdict.candidates_checked,
        verdict.region_nodes,
        _lasso_dict(verdict.lasso),
        {"wall_ms": wall_ms},
    )
    if args.json:
        print(report.to_json())
    else:
        if verdict.witness_mu is not None:
            print(f"{report.verdict} (witness mu = {report.witness_mu})")
        else:
            print(report.verdict)
        print(
            f"candidates checked: {report.candidates_checked}, "
            f"abstraction nodes: {report.region_nodes}, wall ms: {wall_ms}"
        )
        if verdict.lasso is not None:
            d = _lasso_dict(verdict.lasso)
            print("lasso stem:  " + "  ->  ".join(d["stem"]))
            print("lasso cycle: " + "  ->  ".join(d["cycle"]))
        if word_text is not None:
            print("witness word (one cycle unrolling):")
            print(word_text, end="")
    return EXIT_NONEMPTY if verdict.nonempty else EXIT_EMPTY


def cmd_translate(args) -> int:
    a = _load_automaton(args.file)
    out = print_automaton(ta_to_nrtta(a))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        print(out, end="")
    return 0


def cmd_simulate(args) -> int:
    a = _load_automaton(args.file)
    with open(args.word, encoding="utf-8") as fh:
        w = parse_timed_word(fh.read())
    interp = None
    if a.params:
        if args.mu is None:
            raise PreconditionViolated("--mu required for a parametric automaton")
        interp = {p: parse_rational(args.mu) for p in a.params}
    elif args.mu is not None:
        raise PreconditionViolated("--mu given but the automaton has no parameter")
    frontier = run_frontiers(a, w, interp)[-1]
    configs = sorted(
        (c.state, tuple((z, c.valuation[z]) for z in sorted(c.valuation.keys())))
        for c in frontier
    )
    for state, vals in configs:
        parts = " ".join(f"{z}={val}" for z, val in vals)
        print(f"{state} {parts}".rstrip())
    accepting = any(state in a.accepting for state, _ in configs)
    print(f"configurations: {len(configs)}")
    print(f"accepting reachable: {'yes' if accepting else 'no'}")
    return 0


def cmd_regions(args) -> int:
    a = _load_automaton(args.file)
    mu = parse_rational(args.mu) if args.mu is not None else None
    if a.params and mu is None:
        raise PreconditionViolated("--mu required for a parametric automaton")
    scaled, m, d = prepare_fixed(a, mu)
    ra = build_region_automaton(scaled, m, args.max_regions)
    print(f"nodes: {len(ra.nodes)}")
    print(f"edges: {sum(len(out) for out in ra.edges)}")
    print(f"accepting nodes: {len(ra.accepting_nodes)}")
    print(f"region bound m: {m} (constants scaled by {d})")
    lasso = find_lasso(scaled, m, args.max_regions)
    print(f"accepting lasso: {'yes' if lasso is not None else 'no'}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(ra))
    return 0


def cmd_gen(args) -> int:
    from .examples import gen_lk, gen_lpk

    a = gen_lk(args.k) if args.family == "lk" else gen_lpk(args.k)
    out = print_automaton(a)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        print(out, end="")
    return 0


def cmd_validate(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            a = parse_automaton(fh.read())
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    errs = validate(a)
    if errs:
        for e in errs:
            print(str(e), file=sys.stderr)
        return EXIT_BAD_INPUT
    kind = "nrtTA" if is_nrtta(a) else "TA (tests and resets a shared clock)"
    print(
        f"ok: {kind}, states={len(a.states)} clocks={len(a.clocks)} "
        f"params={len(a.params)} transitions={len(a.transitions)}"
    )
    return 0


def cmd_analyze(args) -> int:
    results = run_suites(args.seed, args.trials)
    failed = False
    for name, res in results.items():
        status = "ok" if res.ok else "FAIL"
        print(f"{name}: trials={res.trials} failures={res.failures} {status}")
        if not res.ok:
            failed = True
            for note in res.notes[:5]:
                print(f"  {note}")
    return EXIT_SUITE_FAILURE if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pnta",
        description="Emptiness of parametric timed automata with non-resetting tests",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide language emptiness")
    c.add_argument("file")
    c.add_argument("--mu", help="fix the parameter to this rational instead of sweeping")
    c.add_argument("--witness", action="store_true", help="also print a concrete timed word")
    c.add_argument("--json", action="store_true", help="machine-readable report")
    c.add_argument("--max-regions", type=int, default=DEFAULT_REGION_BUDGET)
    c.add_argument("--auto-translate", action="store_true",
                   help="translate away test-and-reset clocks before checking")
    c.add_argument("--jobs", type=int, default=1, help="parallel candidate checks")
    c.add_argument("--unrollings", type=int, default=1)
    c.set_defaults(fn=cmd_check)

    t = sub.add_parser("translate", help="rewrite so no transition tests a clock it resets")
    t.add_argument("file")
    t.add_argument("-o", "--output")
    t.set_defaults(fn=cmd_translate)

    s = sub.add_parser("simulate", help="run a finite timed word")
    s.add_argument("file")
    s.add_argument("--word", required=True, help="timed word file")
    s.add_argument("--mu", help="parameter value")
    s.set_defaults(fn=cmd_simulate)

    r = sub.add_parser("regions", help="build and summarize the region automaton")
    r.add_argument("file")
    r.add_argument("--mu", help="parameter value (required for parametric input)")
    r.add_argument("--dot", help="write DOT to this path")
    r.add_argument("--max-regions", type=int, default=DEFAULT_REGION_BUDGET)
    r.set_defaults(fn=cmd_regions)

    g = sub.add_parser("gen", help="generate an example automaton")
    g.add_argument("family", choices=["lk", "lpk"])
    g.add_argument("--k", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(fn=cmd_gen)

    v = sub.add_parser("validate", help="parse and check an automaton file")
    v.add_argument("file")
    v.set_defaults(fn=cmd_validate)

    an = sub.add_parser("analyze", help="run the randomized self-check suites")
    an.add_argument("--seed", type=int, default=2026)
    an.add_argument("--trials", type=int, default=None,
                    help="override every suite's trial count")
    an.set_defaults(fn=cmd_analyze)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RegionBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, MalformedWord, UnsupportedAutomaton, NotOneParameter,
            PreconditionViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except PntaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
