"""Region abstraction, region automaton, and Büchi lasso search.

A region records, per clock: integer part up to the bound m (with a flag
for exact-integer values) or "above m", plus the weak ordering of the
fractional parts of the bounded non-integer clocks.  Time successors
form a deterministic chain ending in the absorbing all-above region.

Two search surfaces are built on this:
  - an explicit RegionAutomaton (one edge per delay-then-fire step), and
  - an implicit early-exit search used by the decision procedure, which
    walks single time steps instead of materializing whole successor
    fans and therefore stops as soon as an accepting cycle is found.

Strict monotonicity of timestamps is encoded structurally: a region can
host a second event without time passing a boundary only if it is
time-open (no bounded clock sits on an integer).  The very first event
of a word may additionally happen at time 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Callable, Iterable, NamedTuple, Optional

from .core import And, Atom, Automaton, Guard, Not, Transition, TrueGuard, atoms
from .errors import Infeasible, PreconditionViolated, RegionBudgetExceeded, UnboundSymbol
from .semantics import TimedWord, Valuation, elapse, reset_apply, zero_valuation

DEFAULT_REGION_BUDGET = 10**7


class Region(NamedTuple):
    m: int
    above: frozenset[str]
    floors: tuple[tuple[str, int], ...]
    zero: frozenset[str]
    order: tuple[tuple[str, ...], ...]


RANode = tuple[str, Region]


def zero_region(clocks: Iterable[str], m: int) -> Region:
    names = tuple(sorted(clocks))
    return Region(m, frozenset(), tuple((z, 0) for z in names), frozenset(names), ())


def region_of(v: Valuation, m: int) -> Region:
    """Canonical region of v with boundary constant m >= 1."""
    if m < 1:
        raise PreconditionViolated(f"region bound must be at least 1, got {m}")
    above: set[str] = set()
    floors: list[tuple[str, int]] = []
    zero: set[str] = set()
    frac_groups: dict[Fraction, list[str]] = {}
    for z, val in v.items:
        if val > m:
            above.add(z)
            continue
        k = val.numerator // val.denominator
        floors.append((z, k))
        f = val - k
        if f == 0:
            zero.add(z)
        else:
            frac_groups.setdefault(f, []).append(z)
    order = tuple(tuple(sorted(frac_groups[f])) for f in sorted(frac_groups))
    return Region(m, frozenset(above), tuple(floors), frozenset(zero), order)


def is_time_open(r: Region) -> bool:
    """True iff small positive delays stay inside r."""
    return not r.zero


@cache
def immediate_successor(r: Region) -> Optional[Region]:
    """Next distinct region under time elapse; None once all clocks are above m."""
    if not r.floors:
        return None
    bounded = dict(r.floors)
    if r.zero:
        going_above = frozenset(z for z in r.zero if bounded[z] == r.m)
        staying = tuple(sorted(z for z in r.zero if bounded[z] < r.m))
        new_floors = tuple((z, k) for z, k in r.floors if z not in going_above)
        new_order = ((staying,) + r.order) if staying else r.order
        return Region(r.m, r.above | going_above, new_floors, frozenset(), new_order)
    last = r.order[-1]
    new_floors = tuple((z, k + 1) if z in last else (z, k) for z, k in r.floors)
    return Region(r.m, r.above, new_floors, frozenset(last), r.order[:-1])


@cache
def positive_delay_successors(r: Region) -> tuple[Region, ...]:
    """Every region reachable by some delta > 0, in chain order.

    Includes r itself exactly when r is time-open.
    """
    out: list[Region] = []
    if is_time_open(r):
        out.append(r)
    cur = immediate_successor(r)
    while cur is not None:
        out.append(cur)
        cur = immediate_successor(cur)
    return tuple(out)


@cache
def region_sat(r: Region, g: Guard) -> bool:
    """Truth of g on every valuation of r; constants must not exceed r.m."""
    if isinstance(g, TrueGuard):
        return True
    if isinstance(g, Atom):
        if isinstance(g.bound, str):
            raise PreconditionViolated("parametric atom cannot be evaluated on a region")
        c = g.bound
        if c != int(c):
            raise PreconditionViolated(f"non-integer constant {c}; scale the automaton first")
        c = int(c)
        if c > r.m:
            raise PreconditionViolated(f"constant {c} exceeds region bound {r.m}")
        z = g.clock
        if z in r.above:
            return False
        for name, k in r.floors:
            if name == z:
                if g.op == "<":
                    return k < c
                return z in r.zero and k == c
        raise UnboundSymbol(f"clock {z!r} not tracked by this region")
    if isinstance(g, Not):
        return not region_sat(r, g.arg)
    if isinstance(g, And):
        return region_sat(r, g.left) and region_sat(r, g.right)
    raise TypeError(f"not a guard: {g!r}")


@cache
def region_reset(r: Region, resets: frozenset[str]) -> Region:
    if not resets:
        return r
    bounded = dict(r.floors)
    for z in resets:
        bounded[z] = 0
    new_order = tuple(
        g for g in (tuple(z for z in grp if z not in resets) for grp in r.order) if g
    )
    return Region(
        r.m,
        r.above - resets,
        tuple(sorted(bounded.items())),
        r.zero | (resets & set(bounded)),
        new_order,
    )


def region_str(r: Region) -> str:
    floors = dict(r.floors)
    parts = []
    for z in sorted(set(floors) | set(r.above)):
        if z in r.above:
            parts.append(f"{z}>{r.m}")
        elif z in r.zero:
            parts.append(f"{z}={floors[z]}")
        else:
            parts.append(f"{z} in ({floors[z]},{floors[z] + 1})")
    if sum(len(g) for g in r.order) >= 2:
        parts.append("frac " + "<".join("=".join(g) for g in r.order))
    return ", ".join(parts)


# ---------------------------------------------------------------------------
# Region automaton


@dataclass(frozen=True)
class SymbolicLasso:
    """Stem plus cycle of (state, Region) nodes.

    stem_nodes[0] is the initial node, stem_nodes[-1] == cycle_nodes[0]
    (an accepting node).  stem_edges[i] is the transition index producing
    stem_nodes[i+1]; cycle_edges[i] connects cycle_nodes[i] to
    cycle_nodes[(i+1) % len], labelled by the transition producing the
    latter.
    """

    stem_nodes: tuple[RANode, ...]
    stem_edges: tuple[int, ...]
    cycle_nodes: tuple[RANode, ...]
    cycle_edges: tuple[int, ...]


@dataclass(frozen=True)
class RegionAutomaton:
    automaton: Automaton
    m: int
    nodes: tuple[RANode, ...]
    initial: RANode
    edges: tuple[tuple[tuple[int, int], ...], ...]
    accepting_nodes: frozenset[int]

    def node_index(self, node: RANode) -> int:
        return self._index[node]

    def __post_init__(self):
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.nodes)})


def build_region_automaton(
    a: Automaton, m: int, max_nodes: int = DEFAULT_REGION_BUDGET
) -> RegionAutomaton:
    """Explicit region automaton for a parameter-free automaton.

    Edges realize delay-then-fire steps with strictly positive delays;
    only nodes reachable from the initial all-zero node are emitted.
    """
    if a.params:
        raise PreconditionViolated("parameter-free automaton required; instantiate first")
    if m < 1:
        raise PreconditionViolated(f"region bound must be at least 1, got {m}")
    for t in a.transitions:
        for at in atoms(t.guard):
            if isinstance(at.bound, str):
                raise PreconditionViolated("parameter-free automaton required; instantiate first")
            if at.bound > m:
                raise PreconditionViolated(
                    f"guard constant {at.bound} exceeds region bound {m}"
                )

    by_source: dict[str, list[tuple[int, Transition]]] = {}
    for idx, t in enumerate(a.transitions):
        by_source.setdefault(t.source, []).append((idx, t))

    initial: RANode = (a.initial, zero_region(a.clocks, m))
    nodes: list[RANode] = [initial]
    index: dict[RANode, int] = {initial: 0}
    edges: list[tuple[tuple[int, int], ...]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        q, reg = nodes[i]
        out: list[tuple[int, int]] = []
        seen_out: set[tuple[int, int]] = set()
        for t_idx, t in by_source.get(q, ()):
            for fire in positive_delay_successors(reg):
                if not region_sat(fire, t.guard):
                    continue
                target: RANode = (t.target, region_reset(fire, t.resets))
                j = index.get(target)
                if j is None:
                    if len(nodes) >= max_nodes:
                        raise RegionBudgetExceeded(max_nodes)
                    j = len(nodes)
                    index[target] = j
                    nodes.append(target)
                    queue.append(j)
                if (t_idx, j) not in seen_out:
                    seen_out.add((t_idx, j))
                    out.append((t_idx, j))
        edges.append(tuple(out))
    accepting = frozenset(i for i, (q, _) in enumerate(nodes) if q in a.accepting)
    return RegionAutomaton(a, m, tuple(nodes), initial, tuple(edges), accepting)


# ---------------------------------------------------------------------------
# Generic early-exit lasso search (Tarjan SCC, iterative)


def _cycle_through(af, successors, scc) -> list:
    """Shortest edge path af -> ... -> af inside scc; list of (label, node)."""
    pred: dict = {}
    q: deque = deque()
    for label, child in successors(af):
        if child not in scc:
            continue
        if child == af:
            return [(label, af)]
        if child not in pred:
            pred[child] = (None, label)
            q.append(child)
    while q:
        n = q.popleft()
        for label, child in successors(n):
            if child not in scc:
                continue
            if child == af:
                pairs = [(label, af)]
                cur = n
                while cur is not None:
                    p, lab = pred[cur]
                    pairs.append((lab, cur))
                    cur = p
                pairs.reverse()
                return pairs
            if child not in pred:
                pred[child] = (n, label)
                q.append(child)
    raise AssertionError("strongly connected component without a cycle through its member")


def _search_lasso(
    root,
    successors: Callable,
    is_accepting: Callable,
    max_nodes: Optional[int] = None,
):
    """Find a reachable cycle containing an accepting node.

    Returns (stem_pairs, cycle_pairs) of (label, node) lists, or None.
    Strongly connected components are examined as soon as they complete,
    so absorbing accepting cores end the search early.
    """
    index: dict = {root: 0}
    low: dict = {root: 0}
    onstack: set = {root}
    tarjan_stack: list = [root]
    parent: dict = {root: (None, None)}
    counter = 1
    frames: list = [(root, iter(successors(root)))]
    while frames:
        node, it = frames[-1]
        pushed = False
        for label, child in it:
            if child not in index:
                if max_nodes is not None and counter >= max_nodes:
                    raise RegionBudgetExceeded(max_nodes)
                index[child] = low[child] = counter
                counter += 1
                parent[child] = (node, label)
                tarjan_stack.append(child)
                onstack.add(child)
                frames.append((child, iter(successors(child))))
                pushed = True
                break
            if child in onstack and index[child] < low[node]:
                low[node] = index[child]
        if pushed:
            continue
        frames.pop()
        if frames:
            pnode = frames[-1][0]
            if low[node] < low[pnode]:
                low[pnode] = low[node]
        if low[node] == index[node]:
            scc = set()
            while True:
                w = tarjan_stack.pop()
                onstack.discard(w)
                scc.add(w)
                if w == node:
                    break
            accepting = [w for w in scc if is_accepting(w)]
            if not accepting:
                continue
            cyclic = len(scc) > 1 or any(child == node for _, child in successors(node))
            if not cyclic:
                continue
            af = accepting[0]
            cycle_pairs = _cycle_through(af, successors, scc)
            stem_pairs = []
            cur = af
            while True:
                p, label = parent[cur]
                if p is None:
                    break
                stem_pairs.append((label, cur))
                cur = p
            stem_pairs.reverse()
            return stem_pairs, cycle_pairs
    return None


def _assemble_lasso(
    root_node: RANode,
    stem_pairs,
    cycle_pairs,
    accepting_states: frozenset[str],
    project: Callable,
) -> SymbolicLasso:
    """Project raw search output to (state, Region) nodes and normalize.

    The cycle is rotated so it starts at an accepting node; the rotation
    prefix is folded into the stem.
    """
    walk = [p for p in (project(pair) for pair in stem_pairs) if p is not None]
    cyc = [p for p in (project(pair) for pair in cycle_pairs) if p is not None]
    kc = len(cyc)
    if kc == 0:
        raise AssertionError("cycle with no transition edges")
    cyc_nodes = [n for _, n in cyc]
    cyc_labels = [l for l, _ in cyc]
    r = next(i for i, n in enumerate(cyc_nodes) if n[0] in accepting_states)
    stem_nodes = [root_node] + [n for _, n in walk] + cyc_nodes[: r + 1]
    stem_edges = [l for l, _ in walk] + cyc_labels[: r + 1]
    rot_nodes = cyc_nodes[r:] + cyc_nodes[:r]
    rot_edges = [cyc_labels[(r + 1 + i) % kc] for i in range(kc)]
    return SymbolicLasso(
        tuple(stem_nodes), tuple(stem_edges), tuple(rot_nodes), tuple(rot_edges)
    )


def buchi_nonempty(ra: RegionAutomaton) -> Optional[SymbolicLasso]:
    """Accepting lasso of the region automaton, or None."""

    def successors(i: int):
        return ra.edges[i]

    found = _search_lasso(0, successors, lambda i: i in ra.accepting_nodes)
    if found is None:
        return None
    stem_pairs, cycle_pairs = found

    def project(pair):
        t_idx, j = pair
        return (t_idx, ra.nodes[j])

    return _assemble_lasso(
        ra.nodes[0], stem_pairs, cycle_pairs, ra.automaton.accepting, project
    )


def find_lasso(
    a: Automaton, m: int, max_nodes: int = DEFAULT_REGION_BUDGET
) -> Optional[SymbolicLasso]:
    """Accepting lasso via the implicit single-time-step graph.

    Nodes are (state, region, fresh); a fresh node was just entered by a
    firing and may fire again without an intervening time step only if
    its region is time-open.  The initial node is stale, which is what
    permits a first event at time 0.  Equivalent in verdict to
    buchi_nonempty(build_region_automaton(a, m)) except that it also
    admits runs whose first event happens at time 0.
    """
    if a.params:
        raise PreconditionViolated("parameter-free automaton required; instantiate first")
    for t in a.transitions:
        for at in atoms(t.guard):
            if isinstance(at.bound, str):
                raise PreconditionViolated("parameter-free automaton required; instantiate first")
            if at.bound > m:
                raise PreconditionViolated(f"guard constant {at.bound} exceeds region bound {m}")

    by_source: dict[str, list[tuple[int, Transition]]] = {}
    for idx, t in enumerate(a.transitions):
        by_source.setdefault(t.source, []).append((idx, t))
    r0 = zero_region(a.clocks, m)
    root = (a.initial, r0, False)

    def successors(node):
        q, reg, fresh = node
        out = []
        nxt = immediate_successor(reg)
        if nxt is not None:
            out.append((None, (q, nxt, False)))
        if not fresh or is_time_open(reg):
            for t_idx, t in by_source.get(q, ()):
                if region_sat(reg, t.guard):
                    out.append((t_idx, (t.target, region_reset(reg, t.resets), True)))
        return out

    accepting = a.accepting
    found = _search_lasso(root, successors, lambda n: n[0] in accepting, max_nodes)
    if found is None:
        return None
    stem_pairs, cycle_pairs = found

    def project(pair):
        label, node = pair
        if label is None:
            return None
        return (label, (node[0], node[1]))

    return _assemble_lasso((a.initial, r0), stem_pairs, cycle_pairs, accepting, project)


# ---------------------------------------------------------------------------
# Witness concretization


def _pick_delay(v: Valuation, fire: Region, m: int, allow_zero: bool) -> Fraction:
    """An exact delay moving v into the region fire."""
    pin: Optional[Fraction] = None
    lo = Fraction(0)
    hi: Optional[Fraction] = None
    floors = dict(fire.floors)
    for z in v.keys():
        val = v[z]
        if z in fire.above:
            b = Fraction(m) - val
            if b > lo:
                lo = b
        elif z in fire.zero:
            d = Fraction(floors[z]) - val
            if pin is not None and pin != d:
                raise Infeasible("conflicting exact-integer requirements on the delay")
            pin = d
        else:
            b_lo = Fraction(floors[z]) - val
            b_hi = Fraction(floors[z] + 1) - val
            if b_lo > lo:
                lo = b_lo
            if hi is None or b_hi < hi:
                hi = b_hi
    if pin is not None:
        delta = pin
        if delta < 0 or (delta == 0 and not allow_zero):
            raise Infeasible(f"required delay {delta} is not allowed here")
    elif hi is None:
        delta = lo + 1
    else:
        if hi <= lo:
            raise Infeasible("empty delay window")
        delta = (lo + hi) / 2
    return delta


def concretize_lasso(
    a: Automaton, m: int, lasso: SymbolicLasso, unrollings: int = 1
) -> TimedWord:
    """A finite timed word following the stem plus `unrollings` cycle laps.

    Deterministic: the word for unrollings+1 extends the word for
    unrollings.  Timestamps are exact rationals chosen inside each fire
    region (pinned when a clock must hit an integer, midpoint otherwise).
    """
    if unrollings < 1:
        raise PreconditionViolated("unrollings must be at least 1")
    pairs: list[tuple[int, RANode]] = list(zip(lasso.stem_edges, lasso.stem_nodes[1:]))
    kc = len(lasso.cycle_nodes)
    for _ in range(unrollings):
        for i in range(kc):
            pairs.append((lasso.cycle_edges[i], lasso.cycle_nodes[(i + 1) % kc]))

    v = zero_valuation(a.clocks)
    now = Fraction(0)
    events: list[tuple[str, Fraction]] = []
    cur_region = lasso.stem_nodes[0][1]
    for j, (t_idx, target) in enumerate(pairs):
        t = a.transitions[t_idx]
        candidates: list[Region] = []
        if j == 0:
            candidates.append(cur_region)
        candidates.extend(positive_delay_successors(cur_region))
        fire = None
        for rr in candidates:
            if region_sat(rr, t.guard) and region_reset(rr, t.resets) == target[1]:
                fire = rr
                break
        if fire is None:
            raise Infeasible(f"edge {t_idx} cannot fire from region {region_str(cur_region)}")
        delta = _pick_delay(v, fire, m, allow_zero=(j == 0))
        now += delta
        events.append((t.letter, now))
        v = reset_apply(elapse(v, delta), t.resets)
        cur_region = target[1]
        if region_of(v, m) != cur_region:
            raise Infeasible("concretized valuation left the symbolic path")
    return TimedWord.of(events)


def extract_witness_word(
    ra: RegionAutomaton, lasso: SymbolicLasso, unrollings: int = 1
) -> TimedWord:
    return concretize_lasso(ra.automaton, ra.m, lasso, unrollings)


def to_dot(ra: RegionAutomaton) -> str:
    """DOT rendering: accepting nodes double-circled, labels `state | region`."""

    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph region_automaton {", "  rankdir=LR;", "  __init [shape=point];"]
    for i, (q, reg) in enumerate(ra.nodes):
        shape = "doublecircle" if i in ra.accepting_nodes else "circle"
        lines.append(f'  n{i} [shape={shape}, label="{esc(q)} | {esc(region_str(reg))}"];')
    lines.append("  __init -> n0;")
    for i, outs in enumerate(ra.edges):
        for t_idx, j in outs:
            lines.append(f'  n{i} -> n{j} [label="{esc(ra.automaton.transitions[t_idx].letter)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
