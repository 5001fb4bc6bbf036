"""Parametric emptiness decision by finite candidate enumeration.

For an automaton with one parameter, maximum constant C and state count
|Q|, the language is nonempty for some real parameter value iff it is
nonempty for one of finitely many rational candidates: the half-integers
k/2 up to 2C, the representatives n/2 + alpha of the open half-integer
gaps, and one large representative Xi beyond every constant.  Each
candidate reduces to a parameter-free emptiness check after scaling
away denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import Atom, Automaton, Transition, atoms, is_nrtta, map_atoms, max_constant
from .errors import (
    NonIntegerAfterScaling,
    NotOneParameter,
    PreconditionViolated,
    UnsupportedAutomaton,
)
from .regions import DEFAULT_REGION_BUDGET, SymbolicLasso, concretize_lasso, find_lasso
from .semantics import TimedWord
from .translate import ta_to_nrtta
from .zones import zone_nonempty

Rational = Union[int, Fraction]

HALF_INTEGER = "HalfInteger"
FRACTIONAL_REP = "FractionalRep"
LARGE_REP = "LargeRep"


@dataclass(frozen=True)
class Candidate:
    value: Fraction
    origin: str  # HALF_INTEGER | FRACTIONAL_REP | LARGE_REP
    index: int  # k for k/2, n for n/2 + alpha, 0 for the large representative


@dataclass(frozen=True)
class CandidateSet:
    candidates: tuple[Candidate, ...]
    c: int
    n_states: int
    a_bound: int
    alpha: Fraction
    xi: Fraction
    denom: int

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(cand.value for cand in self.candidates)


@dataclass(frozen=True)
class Verdict:
    nonempty: bool
    witness_mu: Optional[Fraction]
    lasso: Optional[SymbolicLasso]
    scaled_by: int
    m: int
    candidates_checked: int
    region_nodes: int


def candidate_parameters(a: Automaton) -> CandidateSet:
    """The finite candidate list that decides parametric emptiness.

    Contains every half-integer up to 2C, one representative n/2 + alpha
    inside each gap between consecutive half-integers below 2C, and one
    representative Xi larger than every constant; 8C + 2 values total.
    """
    if len(a.params) != 1:
        raise NotOneParameter(f"exactly one parameter required, got {len(a.params)}")
    c = max_constant(a)
    q = len(a.states)
    a_bound = max(q, 4 * c)
    denom = 8 * (1 + c * a_bound)
    alpha = Fraction(1, denom)
    xi = Fraction(2 + c * (1 + q))
    cands = [Candidate(Fraction(k, 2), HALF_INTEGER, k) for k in range(4 * c + 1)]
    cands += [Candidate(Fraction(n, 2) + alpha, FRACTIONAL_REP, n) for n in range(4 * c)]
    cands.append(Candidate(xi, LARGE_REP, 0))
    cands.sort(key=lambda cand: cand.value)
    assert len(cands) == 8 * c + 2
    assert len({cand.value for cand in cands}) == len(cands)
    assert all((cand.value * denom).denominator == 1 for cand in cands)
    return CandidateSet(tuple(cands), c, q, a_bound, alpha, xi, denom)


def instantiate(a: Automaton, mu: Rational) -> Automaton:
    """Replace every parameter atom by the rational value mu."""
    mu = Fraction(mu)
    if mu < 0:
        raise PreconditionViolated(f"parameter value must be nonnegative, got {mu}")
    if len(a.params) > 1:
        raise NotOneParameter(f"at most one parameter supported, got {len(a.params)}")
    if not a.params:
        return a
    val: Union[int, Fraction] = int(mu) if mu.denominator == 1 else mu

    def subst(atom: Atom) -> Atom:
        if isinstance(atom.bound, str):
            return Atom(atom.clock, atom.op, val)
        return atom

    ts = tuple(
        Transition(t.source, t.target, t.letter, map_atoms(t.guard, subst), t.resets)
        for t in a.transitions
    )
    return Automaton(
        a.name, a.alphabet, a.states, a.clocks, frozenset(), a.initial, a.accepting, ts
    )


def scale_constants(a: Automaton, d: int) -> Automaton:
    """Multiply every guard constant by d; the result must be integral."""
    if d < 1:
        raise PreconditionViolated(f"scale factor must be a positive integer, got {d}")

    def scale(atom: Atom) -> Atom:
        if isinstance(atom.bound, str):
            return atom
        scaled = Fraction(atom.bound) * d
        if scaled.denominator != 1:
            raise NonIntegerAfterScaling(
                f"constant {atom.bound} times {d} is not an integer"
            )
        return Atom(atom.clock, atom.op, int(scaled))

    ts = tuple(
        Transition(t.source, t.target, t.letter, map_atoms(t.guard, scale), t.resets)
        for t in a.transitions
    )
    return Automaton(
        a.name, a.alphabet, a.states, a.clocks, a.params, a.initial, a.accepting, ts
    )


def prepare_fixed(
    a: Automaton, mu: Optional[Rational]
) -> tuple[Automaton, int, int]:
    """(scaled parameter-free automaton, region bound M, scale factor d).

    d is the lcm of the constant denominators after instantiation, so the
    scaled automaton has natural-number constants; M majorizes twice the
    original maximum constant, the parameter value, and every scaled
    constant, all in the scaled time unit.
    """
    c_orig = max_constant(a)
    inst = instantiate(a, mu) if (a.params and mu is not None) else a
    if inst.params:
        raise PreconditionViolated("parameter value required for a parametric automaton")
    denoms = [
        Fraction(at.bound).denominator
        for t in inst.transitions
        for at in atoms(t.guard)
    ]
    d = math.lcm(*denoms) if denoms else 1
    scaled = scale_constants(inst, d)
    m = max(2 * c_orig * d, max_constant(scaled))
    if mu is not None:
        m = max(m, math.ceil(Fraction(mu) * d))
    return scaled, m, d


def emptiness_fixed(
    a: Automaton,
    mu: Optional[Rational] = None,
    max_nodes: int = DEFAULT_REGION_BUDGET,
    include_lasso: bool = True,
) -> Verdict:
    """Emptiness at one fixed parameter value (or of a parameter-free automaton).

    The verdict comes from the zone engine; when the language is nonempty
    and include_lasso is set, a symbolic lasso over the scaled automaton's
    regions is recovered by the region engine.
    """
    if a.params and mu is None:
        raise PreconditionViolated("parameter value required for a parametric automaton")
    scaled, m, d = prepare_fixed(a, mu)
    nonempty, explored = zone_nonempty(scaled, m, max_nodes)
    lasso = None
    if nonempty and include_lasso:
        lasso = find_lasso(scaled, m, max_nodes)
        if lasso is None:
            raise AssertionError(
                "internal inconsistency: zone engine found a lasso the region engine did not"
            )
    witness = Fraction(mu) if (nonempty and mu is not None) else None
    return Verdict(nonempty, witness, lasso, d, m, 1, explored)


def _checkable(a: Automaton) -> Automaton:
    """Resolve the automaton actually searched (auto-translating one-clock input)."""
    if not is_nrtta(a):
        if len(a.clocks) == 1:
            return ta_to_nrtta(a)
        raise UnsupportedAutomaton(
            "guard-and-reset of the same clock is only supported for one-clock automata"
        )
    return a


def parametric_emptiness(
    a: Automaton, max_nodes: int = DEFAULT_REGION_BUDGET
) -> Verdict:
    """Does any real parameter value give the automaton a nonempty language?

    Checks the finite candidate list in ascending order and reports the
    first nonempty value as witness.  One-clock automata that test and
    reset the same clock are translated first; two-clock automata that do
    so are rejected, as are automata with more than two clocks or more
    than one parameter.
    """
    if len(a.params) > 1:
        raise UnsupportedAutomaton(f"at most one parameter supported, got {len(a.params)}")
    b = _checkable(a)
    if len(b.clocks) > 2:
        raise UnsupportedAutomaton(f"at most two clocks supported, got {len(b.clocks)}")
    if not b.params:
        v = emptiness_fixed(b, None, max_nodes)
        return Verdict(v.nonempty, None, v.lasso, v.scaled_by, v.m, 1, v.region_nodes)
    cs = candidate_parameters(b)
    checked = 0
    total_nodes = 0
    for cand in cs.candidates:
        checked += 1
        v = emptiness_fixed(b, cand.value, max_nodes)
        total_nodes += v.region_nodes
        if v.nonempty:
            return Verdict(True, cand.value, v.lasso, v.scaled_by, v.m, checked, total_nodes)
    return Verdict(False, None, None, 1, 0, checked, total_nodes)


def witness_word(a: Automaton, verdict: Verdict, unrollings: int = 1) -> TimedWord:
    """Concrete timed word (in the original time unit) realizing a Nonempty verdict.

    Replays the verdict's lasso on the scaled automaton and divides the
    timestamps back by the scale factor, so the word is accepted by the
    input automaton at the witness parameter value.
    """
    if not verdict.nonempty or verdict.lasso is None:
        raise PreconditionViolated("a Nonempty verdict with a lasso is required")
    b = _checkable(a)
    scaled, m, d = prepare_fixed(b, verdict.witness_mu)
    assert d == verdict.scaled_by and m == verdict.m
    w = concretize_lasso(scaled, m, verdict.lasso, unrollings)
    return TimedWord.of((letter, ts / d) for letter, ts in w)
