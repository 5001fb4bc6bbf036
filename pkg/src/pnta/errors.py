"""Exception hierarchy shared by all pnta modules."""

from __future__ import annotations


class PntaError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PntaError):
    """Malformed automaton or timed-word text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedWord(PntaError):
    """Timed word violates strict monotonicity or has a negative timestamp."""


class UnboundSymbol(PntaError):
    """A guard references a clock or parameter absent from the valuation."""


class WrongSource(PntaError):
    """Transition fired from a configuration with a different control state."""


class NonPositiveDelay(PntaError):
    """Delay must be strictly positive (zero allowed only on the first step)."""


class GuardViolated(PntaError):
    """Guard evaluated to false for the attempted step."""


class PreconditionViolated(PntaError):
    """Operation called outside its stated precondition."""


class RegionBudgetExceeded(PntaError):
    """Region graph exploration hit the node budget."""

    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"region node budget exceeded ({limit} nodes)")


class NotOneParameter(PntaError):
    """Candidate enumeration needs exactly one parameter."""


class NonIntegerAfterScaling(PntaError):
    """A constant did not become an integer under the given scale factor."""


class UnsupportedAutomaton(PntaError):
    """Outside the decidable fragment (clocks > 2, params > 1, or a
    non-translatable test-and-reset automaton)."""


class DegenerateParameter(PntaError):
    """Parameter value is a multiple of 1/2; the fractional machinery is
    undefined there (such values are handled by direct instantiation)."""


class NotInSZ(PntaError):
    """Fractional value lies outside the polarity's distinguished intervals."""


class ChiTooLarge(PntaError):
    """Bracket width chi does not fit inside the interval."""


class PolarityMismatch(PntaError):
    """The two parameter values have different polarity."""


class FloorMismatch(PntaError):
    """The two parameter values have different integer parts."""


class NotCompleteAgreement(PntaError):
    """Starting valuations are not in complete agreement."""


class Infeasible(PntaError):
    """Agreement transport found an empty feasible interval.  This never
    happens when the preconditions hold; raising it signals a genuine
    counterexample to the transport property."""


class Disconnected(PntaError):
    """Consecutive path nodes are not connected in the region automaton."""
