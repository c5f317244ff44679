"""Problem definitions, iteration records and stopping criteria.

These are the pieces shared by every solver: a Problem bundles a scalar
function with its analytic first derivative, an IterateHistory records the
root estimates a solver generates together with the cached function data,
and a StopCriterion decides when a run is finished.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .precision import DomainError, is_finite


class RootFindingError(Exception):
    """Base class for structured solver failures."""


class DegenerateRatio(RootFindingError):
    """Coincident function values make the step-ratio system singular."""


class DegenerateNodes(RootFindingError):
    """Interpolation nodes share an abscissa (duplicate y values)."""


class InvalidNode(RootFindingError):
    """An interpolation node carries a non-finite value."""


class ZeroDerivative(RootFindingError):
    """A step that needs f'(x) != 0 hit a zero derivative."""


class InvalidBracket(RootFindingError):
    """The endpoints of a would-be bracket do not straddle a sign change."""


class InvalidFamily(RootFindingError):
    """A method family outside the validity domain of the rate theory."""


class TooFewIterates(RootFindingError):
    """Not enough history for the requested estimate."""


@dataclass
class EvalCounters:
    """Exact tally of function and derivative evaluations."""

    f: int = 0
    df: int = 0

    def reset(self) -> None:
        self.f = 0
        self.df = 0


@dataclass
class Problem:
    """A scalar root-finding problem f(x) = 0 with analytic derivative.

    The evaluators must accept either a float or an mpmath scalar and
    return the same type, so a single Problem can be solved at any
    precision level. ``known_root`` and ``default_bracket`` are reference
    metadata; when a bracket [a, b] is given, f(a)*f(b) < 0 must hold.
    """

    id: str
    f: Callable
    df: Callable
    default_start: str = "0"
    known_root: Optional[str] = None
    default_bracket: Optional[tuple] = None
    label: str = ""
    counters: EvalCounters = field(default_factory=EvalCounters, repr=False)


def evaluate(problem: Problem, x, derivative: bool = True):
    """Evaluate f(x) and optionally f'(x), updating the problem counters.

    Domain failures (square root of a negative number, log of a
    non-positive number, complex results) surface as DomainError so the
    caller can reject the point instead of crashing.
    """
    if not is_finite(x):
        raise DomainError(f"evaluation point {x!r} is not finite", x=x)
    fx = problem.f(x)
    problem.counters.f += 1
    if not derivative:
        return fx, None
    dfx = problem.df(x)
    problem.counters.df += 1
    return fx, dfx


@dataclass(frozen=True)
class IterationRecord:
    """One root estimate with its cached function data."""

    x: object
    fx: object
    dfx: object  # None when the producing method never evaluated f'
    index: int


class IterateHistory:
    """Root estimates in generation order, indices contiguous from 0."""

    def __init__(self):
        self.entries: list[IterationRecord] = []

    def append(self, x, fx, dfx=None) -> IterationRecord:
        rec = IterationRecord(x=x, fx=fx, dfx=dfx, index=len(self.entries))
        self.entries.append(rec)
        return rec

    def tail(self, s: int) -> list[IterationRecord]:
        if len(self.entries) < s:
            raise TooFewIterates(f"need {s} records, have {len(self.entries)}")
        return self.entries[-s:]

    def xs(self) -> list:
        return [rec.x for rec in self.entries]

    def last_increment(self):
        if len(self.entries) < 2:
            raise TooFewIterates("increment needs at least two iterates")
        return abs(self.entries[-1].x - self.entries[-2].x)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i) -> IterationRecord:
        return self.entries[i]


ABSOLUTE_INCREMENT = "absolute-increment"
RELATIVE_BRACKET = "relative-bracket"


@dataclass(frozen=True)
class StopCriterion:
    """Termination rule: absolute increment or relative bracket width."""

    kind: str
    threshold: object

    def __post_init__(self):
        if self.kind not in (ABSOLUTE_INCREMENT, RELATIVE_BRACKET):
            raise ValueError(f"unknown stop criterion kind {self.kind!r}")

    @classmethod
    def increment(cls, threshold) -> "StopCriterion":
        return cls(ABSOLUTE_INCREMENT, threshold)

    @classmethod
    def relative_bracket(cls, delta) -> "StopCriterion":
        return cls(RELATIVE_BRACKET, delta)


def should_stop(criterion: StopCriterion, state) -> bool:
    """Check the criterion against an IterateHistory or a bracket.

    For absolute-increment the state is an IterateHistory with at least two
    entries; for relative-bracket it is any object with ``a`` and ``b``
    attributes (the robust solver's bracket state).
    """
    if criterion.kind == ABSOLUTE_INCREMENT:
        if not isinstance(state, IterateHistory):
            raise TypeError("absolute-increment criterion needs an IterateHistory")
        return state.last_increment() <= criterion.threshold
    return abs(state.a - state.b) <= criterion.threshold * abs(state.b)
