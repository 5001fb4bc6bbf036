"""Translation of an arbitrary TA into an equivalent nrtTA with one extra clock.

The trick: a transition that both tests and resets clock x is split in
role.  The guard keeps reading the clock that currently represents x,
while the reset is performed on a spare clock that nothing tests; the
spare then becomes the representative of x, and bookkeeping of who
represents whom lives in the product control state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Atom, Automaton, Transition, map_atoms


@dataclass(frozen=True)
class ClockMap:
    """Assignment original clock -> pool clock, plus the current spare.

    Several originals may share one pool clock (they were reset together
    and have been equal ever since).  The spare is never in the image.
    """

    assign: tuple[tuple[str, str], ...]
    spare: str

    def lookup(self, original: str) -> str:
        for orig, pool in self.assign:
            if orig == original:
                return pool
        raise KeyError(original)

    def encode(self) -> str:
        parts = [f"{orig}:{pool}" for orig, pool in self.assign]
        parts.append(f"s:{self.spare}")
        return ".".join(parts)


def _pool_name(index: int) -> str:
    return f"x{index}"


def _initial_map(originals: tuple[str, ...], pool: tuple[str, ...]) -> ClockMap:
    if not originals:
        return ClockMap((), pool[0])
    assign = tuple((orig, pool[0]) for orig in originals)
    return ClockMap(assign, pool[1])


def _apply_reset(cm: ClockMap, resets: frozenset[str], pool: tuple[str, ...]) -> ClockMap:
    if not resets:
        return cm
    assign = tuple(
        (orig, cm.spare if orig in resets else pool_clock) for orig, pool_clock in cm.assign
    )
    image = {pool_clock for _, pool_clock in assign}
    spare = next(p for p in pool if p not in image)
    return ClockMap(assign, spare)


def product_state_name(q: str, cm: ClockMap) -> str:
    return f"{q}@{cm.encode()}"


def product_state_origin(name: str) -> str:
    """Original control state of a product state produced by ta_to_nrtta."""
    return name.rsplit("@", 1)[0]


def ta_to_nrtta(a: Automaton) -> Automaton:
    """Equivalent nrtTA over |clocks|+1 pool clocks; only reachable product states."""
    originals = tuple(sorted(a.clocks))
    pool = tuple(_pool_name(i) for i in range(1, len(originals) + 2))
    m0 = _initial_map(originals, pool)
    init_state = (a.initial, m0)

    by_source: dict[str, list[Transition]] = {}
    for t in a.transitions:
        by_source.setdefault(t.source, []).append(t)

    seen: set[tuple[str, ClockMap]] = {init_state}
    order: list[tuple[str, ClockMap]] = [init_state]
    out_transitions: list[Transition] = []
    frontier = [init_state]
    while frontier:
        nxt: list[tuple[str, ClockMap]] = []
        for q, cm in frontier:
            for t in by_source.get(q, ()):
                guard = map_atoms(
                    t.guard, lambda at, cm=cm: Atom(cm.lookup(at.clock), at.op, at.bound)
                )
                cm2 = _apply_reset(cm, t.resets, pool)
                target = (t.target, cm2)
                if target not in seen:
                    seen.add(target)
                    order.append(target)
                    nxt.append(target)
                out_transitions.append(
                    Transition(
                        product_state_name(q, cm),
                        product_state_name(*target),
                        t.letter,
                        guard,
                        frozenset({cm.spare}) if t.resets else frozenset(),
                    )
                )
        frontier = nxt

    state_names = [product_state_name(q, cm) for q, cm in order]
    accepting = [product_state_name(q, cm) for q, cm in order if q in a.accepting]
    return Automaton(
        name=f"{a.name}_nrt",
        alphabet=a.alphabet,
        states=state_names,
        clocks=pool,
        params=a.params,
        initial=product_state_name(a.initial, m0),
        accepting=accepting,
        transitions=out_transitions,
    )
