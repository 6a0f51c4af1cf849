"""Finite outcome spaces and their Cartesian products.

This is the set-based view of an event tree. A :class:`WorldModel` enumerates
every joint assignment of component states; events are plain frozensets of
world indices. Nothing here knows about trees, which is what makes it usable
as an independent oracle for the list-based engine in :mod:`eventtree.tree`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import ForeignWorld, InvalidSpace, NotDisjoint, UnknownComponent

Probability = Union[Fraction, float, int]
ConcreteEvent = frozenset  # frozenset[int] of world indices

NULL_STATE = "null"

DUPLICATE_STATE = "DuplicateState"
PROBABILITY_OUT_OF_RANGE = "ProbabilityOutOfRange"
MASS_EXCEEDS_ONE = "MassExceedsOne"
LENGTH_MISMATCH = "LengthMismatch"
EMPTY_COMPONENT = "EmptyComponent"


@dataclass(frozen=True)
class OutcomeSpace:
    """Mutually exclusive states of a single component.

    Whatever mass the listed states leave over belongs to an implicit null
    ("hold") state, so ``sum(state_probs) == 1`` is not required.
    """

    component: str
    states: tuple[str, ...]
    state_probs: tuple[Probability, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "state_probs", tuple(self.state_probs))

    @property
    def null_mass(self) -> Probability:
        rest = 1 - sum(self.state_probs)
        # rounding noise from complementary float probabilities
        if isinstance(rest, float) and abs(rest) < 1e-12:
            return 0.0
        return rest

    def prob(self, state: str) -> Probability:
        if state == NULL_STATE and state not in self.states:
            return self.null_mass
        try:
            return self.state_probs[self.states.index(state)]
        except ValueError:
            raise UnknownComponent(f"{self.component} has no state {state!r}") from None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    component: str
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_space(space: OutcomeSpace) -> ValidationReport:
    """Check the distinct / disjoint / complete / finite constraints.

    Disjointness holds by construction (a component is in exactly one state
    per world) and the null state is always considered present, so only the
    labels and the probability mass can actually be wrong.
    """
    found = []
    if not space.component:
        found.append(Violation(EMPTY_COMPONENT, "component id is empty"))
    if len(space.states) != len(space.state_probs):
        found.append(Violation(
            LENGTH_MISMATCH,
            f"{len(space.states)} states but {len(space.state_probs)} probabilities",
        ))
    seen = set()
    for s in space.states:
        if s in seen:
            found.append(Violation(DUPLICATE_STATE, f"state {s!r} appears more than once"))
        elif s == NULL_STATE:
            found.append(Violation(DUPLICATE_STATE, f"state name {s!r} clashes with the implicit null state"))
        seen.add(s)
    for s, p in zip(space.states, space.state_probs):
        if not (0 <= p <= 1):
            found.append(Violation(PROBABILITY_OUT_OF_RANGE, f"P({s}) = {p} is outside [0, 1]"))
    total = sum(space.state_probs)
    # float spaces built from 1 - e^(-lt) and e^(-lt) may overshoot by an ulp
    slack = 0 if all(isinstance(p, (int, Fraction)) for p in space.state_probs) else 1e-12
    if total > 1 + slack:
        found.append(Violation(MASS_EXCEEDS_ONE, f"state probabilities sum to {total} > 1"))
    return ValidationReport(space.component, tuple(found))


@dataclass(frozen=True)
class WorldModel:
    """Product sample space of independent components.

    A world is a tuple holding one state index per component; index
    ``len(space.states)`` stands for the null state. Every component gets a
    null slot even when its mass is zero, so the number of worlds is always
    ``prod(len(states) + 1)``.
    """

    spaces: tuple[OutcomeSpace, ...]
    _positions: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(self.spaces))
        positions = {}
        for i, space in enumerate(self.spaces):
            report = validate_space(space)
            if not report.ok:
                raise InvalidSpace("; ".join(v.message for v in report.violations))
            if space.component in positions:
                raise InvalidSpace(f"duplicate component id {space.component!r}")
            positions[space.component] = i
        object.__setattr__(self, "_positions", positions)

    @property
    def components(self) -> list[str]:
        return [s.component for s in self.spaces]

    @property
    def exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for s in self.spaces for p in s.state_probs)

    def space(self, component: str) -> OutcomeSpace:
        try:
            return self.spaces[self._positions[component]]
        except KeyError:
            raise UnknownComponent(f"unknown component {component!r}") from None

    @cached_property
    def worlds(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(len(s.states) + 1) for s in self.spaces)))

    @cached_property
    def world_prob(self) -> list[Probability]:
        per_component = [list(s.state_probs) + [s.null_mass] for s in self.spaces]
        return [math.prod(per_component[c][k] for c, k in enumerate(w)) for w in self.worlds]

    @cached_property
    def full(self) -> ConcreteEvent:
        return frozenset(range(len(self.worlds)))

    @cached_property
    def _events(self) -> dict[tuple[str, str], ConcreteEvent]:
        table = {}
        for c, space in enumerate(self.spaces):
            labels = list(space.states) + [NULL_STATE]
            for k, label in enumerate(labels):
                table[space.component, label] = frozenset(
                    i for i, w in enumerate(self.worlds) if w[c] == k
                )
        return table

    def event(self, component: str, state: str) -> ConcreteEvent:
        """Worlds in which ``component`` is in ``state`` (``"null"`` allowed)."""
        try:
            return self._events[component, state]
        except KeyError:
            self.space(component)
            raise UnknownComponent(f"{component} has no state {state!r}") from None

    def outcome_events(self, component: str, include_null: bool | None = None) -> frozenset:
        """The component's outcome space lifted to concrete events.

        By default the null-state event is included only when it carries
        positive mass.
        """
        space = self.space(component)
        if include_null is None:
            include_null = space.null_mass != 0
        labels = list(space.states) + ([NULL_STATE] if include_null else [])
        return frozenset(self.event(component, s) for s in labels)


def is_event_space(events: Iterable[ConcreteEvent]) -> bool:
    """Lifted validity check: finite and pairwise disjoint.

    The empty event is treated as implicitly present.
    """
    events = list(events)
    for a, b in itertools.combinations(events, 2):
        if a != b and a & b:
            return False
    return True


def _require_space(w, name):
    if not is_event_space(w):
        raise InvalidSpace(f"{name} is not a disjoint event space")


def inter_product(w1: Iterable[ConcreteEvent], w2: Iterable[ConcreteEvent]) -> frozenset:
    """All pairwise intersections ``x & y`` for x in w1, y in w2."""
    w1, w2 = frozenset(w1), frozenset(w2)
    _require_space(w1, "first operand")
    _require_space(w2, "second operand")
    return frozenset(x & y for x in w1 for y in w2)


def product(w1: Iterable[ConcreteEvent], w2: Iterable[ConcreteEvent]) -> frozenset:
    """Cartesian product of two event spaces; the result must be disjoint.

    Only the result is checked, so overlapping operands surface here as
    :class:`NotDisjoint` rather than :class:`InvalidSpace`.
    """
    result = frozenset(x & y for x in w1 for y in w2)
    for a, b in itertools.combinations(result, 2):
        if a & b:
            raise NotDisjoint(f"product events overlap on worlds {sorted(a & b)[:5]}")
    return result


def n_product(spaces: Sequence[Iterable[ConcreteEvent]], last: Iterable[ConcreteEvent]) -> frozenset:
    """Fold :func:`product` over ``spaces`` starting from ``last``."""
    acc = frozenset(last)
    for w in spaces:
        acc = product(w, acc)
    return acc


def oracle_prob(model: WorldModel, event: Iterable[int]) -> Probability:
    """Probability of ``event`` by summing the masses of its worlds."""
    weights = model.world_prob
    total = 0
    for i in sorted(event):
        if not 0 <= i < len(weights):
            raise ForeignWorld(f"world index {i} outside model of {len(weights)} worlds")
        total += weights[i]
    return total


def union(events: Iterable[ConcreteEvent]) -> ConcreteEvent:
    return frozenset().union(*events)
