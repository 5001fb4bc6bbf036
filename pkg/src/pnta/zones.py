"""Difference-bound-matrix zone graph for fast emptiness verdicts.

The region construction in `regions` is the reference semantics.  This
engine answers the same Büchi emptiness question but its state count
tracks guard structure rather than the numeric magnitude of constants,
which matters after scaling (a candidate parameter with denominator d
multiplies every constant by d; region counts grow quadratically with
that, zone counts do not).  Verdict agreement between the two engines is
fuzz-checked in the test suite.

Bounds are encoded as integers 2v+1 for "<= v" and 2v for "< v", with a
large sentinel for infinity; matrix row/column 0 is the constant zero
clock.  Strict monotonicity of timestamps is realized by a delay
operation that makes every lower bound strict; the initial node alone
uses the non-strict delay so that the first event of a word may happen
at time 0.
"""

from __future__ import annotations

from typing import Optional

from .core import And, Atom, Automaton, Guard, Not, TrueGuard, atoms
from .errors import PreconditionViolated
from .regions import DEFAULT_REGION_BUDGET, _search_lasso

INF = 1 << 40


def _bnd(value: int, weak: bool) -> int:
    return 2 * value + (1 if weak else 0)


_LE0 = _bnd(0, True)


def _add(b1: int, b2: int) -> int:
    if b1 >= INF or b2 >= INF:
        return INF
    return ((b1 >> 1) + (b2 >> 1)) * 2 + (b1 & b2 & 1)


def _canonical(d: list[list[int]], n: int) -> bool:
    """Floyd-Warshall closure; False when the zone is empty."""
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik >= INF:
                continue
            di = d[i]
            for j in range(n):
                b = _add(dik, dk[j])
                if b < di[j]:
                    di[j] = b
    return all(d[i][i] >= _LE0 for i in range(n))


def _up(d: list[list[int]], n: int, strict: bool) -> None:
    """Delay: drop upper bounds; with strict=True also require delta > 0."""
    for i in range(1, n):
        d[i][0] = INF
    if strict:
        for j in range(1, n):
            b = d[0][j]
            if b < INF and b & 1:
                d[0][j] = b - 1


def _reset(d: list[list[int]], n: int, idxs: tuple[int, ...]) -> None:
    for x in idxs:
        for j in range(n):
            d[x][j] = d[0][j]
            d[j][x] = d[j][0]
        d[x][x] = _LE0


def _extrapolate(d: list[list[int]], n: int, m: int) -> None:
    cap_hi = _bnd(m, True)
    cap_lo = _bnd(-m, False)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            b = d[i][j]
            if b >= INF:
                continue
            if b > cap_hi:
                d[i][j] = INF
            elif b < cap_lo:
                d[i][j] = cap_lo


def _dnf(g: Guard, positive: bool) -> list[list[tuple[str, str, int]]]:
    """Disjunctive normal form over single-clock interval literals."""
    if isinstance(g, TrueGuard):
        return [[]] if positive else []
    if isinstance(g, Atom):
        c = int(g.bound)
        if positive:
            return [[(g.clock, g.op, c)]]
        if g.op == "<":
            return [[(g.clock, ">=", c)]]
        return [[(g.clock, "<", c)], [(g.clock, ">", c)]]
    if isinstance(g, Not):
        return _dnf(g.arg, not positive)
    if isinstance(g, And):
        if positive:
            return [dl + dr for dl in _dnf(g.left, True) for dr in _dnf(g.right, True)]
        return _dnf(g.left, False) + _dnf(g.right, False)
    raise TypeError(f"not a guard: {g!r}")


def _apply_literal(d: list[list[int]], xi: int, op: str, c: int) -> None:
    if op in ("<", "<="):
        b = _bnd(c, op == "<=")
        if b < d[xi][0]:
            d[xi][0] = b
    elif op in (">", ">="):
        b = _bnd(-c, op == ">=")
        if b < d[0][xi]:
            d[0][xi] = b
    else:  # '='
        up_b = _bnd(c, True)
        lo_b = _bnd(-c, True)
        if up_b < d[xi][0]:
            d[xi][0] = up_b
        if lo_b < d[0][xi]:
            d[0][xi] = lo_b


def zone_nonempty(
    a: Automaton, m: int, max_nodes: int = DEFAULT_REGION_BUDGET
) -> tuple[bool, int]:
    """(accepting lasso exists, zone nodes explored) for a parameter-free automaton."""
    if a.params:
        raise PreconditionViolated("parameter-free automaton required; instantiate first")
    for t in a.transitions:
        for at in atoms(t.guard):
            if isinstance(at.bound, str):
                raise PreconditionViolated("parameter-free automaton required; instantiate first")
            if at.bound > m:
                raise PreconditionViolated(f"guard constant {at.bound} exceeds bound {m}")

    clock_index = {z: i + 1 for i, z in enumerate(sorted(a.clocks))}
    n = len(a.clocks) + 1
    by_source: dict[str, list[tuple[int, object, list, tuple[int, ...]]]] = {}
    for idx, t in enumerate(a.transitions):
        disjuncts = [
            [(clock_index[z], op, c) for z, op, c in disj] for disj in _dnf(t.guard, True)
        ]
        reset_idxs = tuple(sorted(clock_index[z] for z in t.resets))
        by_source.setdefault(t.source, []).append((idx, t, disjuncts, reset_idxs))

    zero_key = tuple(tuple(_LE0 for _ in range(n)) for _ in range(n))
    root = (a.initial, zero_key, True)
    memo: dict = {}

    def successors(node):
        cached = memo.get(node)
        if cached is not None:
            return cached
        q, key, first = node
        base = [list(row) for row in key]
        _up(base, n, strict=not first)
        _canonical(base, n)
        out = []
        for t_idx, t, disjuncts, reset_idxs in by_source.get(q, ()):
            for disj in disjuncts:
                z = [row[:] for row in base]
                for xi, op, c in disj:
                    _apply_literal(z, xi, op, c)
                if not _canonical(z, n):
                    continue
                _reset(z, n, reset_idxs)
                _extrapolate(z, n, m)
                if not _canonical(z, n):
                    continue
                out.append((t_idx, (t.target, tuple(map(tuple, z)), False)))
        memo[node] = out
        return out

    accepting = a.accepting
    found = _search_lasso(root, successors, lambda nd: nd[0] in accepting, max_nodes)
    return found is not None, len(memo)
