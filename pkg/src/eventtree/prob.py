"""Analytic probabilities of paths, nodes, branches and generated trees.

These are the closed forms (products of marginals, sums over disjoint
children) rather than world enumeration. Components are independent by
construction of :class:`~eventtree.sample_space.WorldModel`, so the product
rule for a path holds as long as no component appears twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DependentLabel,
    DuplicateComponent,
    ExactModeError,
    NegativeRate,
    NegativeTime,
    NotDisjoint,
)
from .sample_space import OutcomeSpace, Probability, WorldModel, oracle_prob
from .tree import Atomic, AtomicEvent, Branch, EventTree, Node, Path, down, semantics, up, DOWN, UP

EXACT = "exact"
FLOAT = "float"


@dataclass(frozen=True)
class ProbabilityModel:
    """A world model plus the numeric mode and, optionally, failure rates.

    When ``rates`` is set, each rated component has states ``up`` and
    ``down`` with probabilities ``exp(-rate*time)`` and ``1 - exp(-rate*time)``.
    """

    world: WorldModel
    mode: str = EXACT
    rates: Mapping[str, float] | None = field(default=None, compare=False, hash=False)
    time: float | None = None

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"mode must be {EXACT!r} or {FLOAT!r}, got {self.mode!r}")
        if self.mode == EXACT and not self.world.exact:
            raise ExactModeError("exact mode needs rational state probabilities")
        if self.mode == EXACT and self.rates:
            raise ExactModeError("lifetime models involve exp() and cannot be evaluated exactly")

    @classmethod
    def from_states(cls, table: Mapping[str, Mapping[str, Probability]], mode: str | None = None):
        """Build from ``{component: {state: prob}}``; mode defaults from the value types."""
        spaces = [OutcomeSpace(c, tuple(states), tuple(states.values())) for c, states in table.items()]
        world = WorldModel(tuple(spaces))
        if mode is None:
            mode = EXACT if world.exact else FLOAT
        if mode == EXACT:
            return cls(world, EXACT)
        spaces = [OutcomeSpace(s.component, s.states, tuple(float(p) for p in s.state_probs)) for s in spaces]
        return cls(WorldModel(tuple(spaces)), FLOAT)

    @classmethod
    def two_state(cls, p_up: Mapping[str, Probability], mode: str | None = None):
        """Components with ``up``/``down`` states and no null mass."""
        return cls.from_states({c: {UP: p, DOWN: 1 - p} for c, p in p_up.items()}, mode)

    @classmethod
    def from_rates(cls, rates: Mapping[str, float], time: float, mode: str = FLOAT):
        if mode == EXACT:
            raise ExactModeError("lifetime models involve exp() and cannot be evaluated exactly")
        spaces = []
        for c, rate in rates.items():
            fail = exp_cdf(rate, time)
            spaces.append(OutcomeSpace(c, (UP, DOWN), (exp_reliability(rate, time), fail)))
        return cls(WorldModel(tuple(spaces)), FLOAT, dict(rates), float(time))

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def marginal(self, event: AtomicEvent) -> Probability:
        return self.world.space(event.component).prob(event.state)


def exp_cdf(rate: float, t: float) -> float:
    """Probability of failure by time ``t`` for a constant failure rate."""
    if rate < 0:
        raise NegativeRate(f"failure rate must be >= 0, got {rate}")
    if t < 0:
        raise NegativeTime(f"time must be >= 0, got {t}")
    return -math.expm1(-rate * t)


def exp_reliability(rate: float, t: float) -> float:
    """Complement of :func:`exp_cdf`, i.e. ``exp(-rate*t)``."""
    if rate < 0:
        raise NegativeRate(f"failure rate must be >= 0, got {rate}")
    if t < 0:
        raise NegativeTime(f"time must be >= 0, got {t}")
    return math.exp(-rate * t)


def two_state(components: Iterable[str]) -> list[list[AtomicEvent]]:
    return [[up(c), down(c)] for c in components]


def prod(xs: Iterable[Probability]) -> Probability:
    return math.prod(xs)


def prob_list(model: ProbabilityModel, events: Iterable[AtomicEvent]) -> list[Probability]:
    return [model.marginal(e) for e in events]


def prob_path(model: ProbabilityModel, p: Path) -> Probability:
    seen = set()
    for c in Path(p).components:
        if c in seen:
            raise DuplicateComponent(f"component {c!r} appears twice in path {Path(p)}")
        seen.add(c)
    return prod(prob_list(model, p))


def sum_prob(model: ProbabilityModel, events: Iterable) -> Probability:
    """Sum of individual probabilities; disjointness is the caller's business.

    Elements may be concrete world sets (summed by enumeration), atomic
    events, paths or event trees.
    """
    total = 0
    for e in events:
        if isinstance(e, frozenset):
            total += oracle_prob(model.world, e)
        else:
            total += prob_tree(model, e)
    return total


def sum_prob_2d(model: ProbabilityModel, lists: Iterable[Iterable]) -> list[Probability]:
    return [sum_prob(model, inner) for inner in lists]


def _components(tree: EventTree) -> set[str]:
    if isinstance(tree, Atomic):
        ev = tree.event
        return {ev.component} if isinstance(ev, AtomicEvent) else set(ev.components)
    found = {tree.label.component} if isinstance(tree, Branch) else set()
    for c in tree.children:
        found |= _components(c)
    return found


def _check_disjoint(model: ProbabilityModel, children: Sequence[EventTree]) -> None:
    seen = frozenset()
    for i, child in enumerate(children):
        ev = semantics(model.world, child)
        if seen & ev:
            raise NotDisjoint(f"child {i} overlaps an earlier sibling")
        seen |= ev


def prob_tree(model: ProbabilityModel, tree, check_disjoint: bool = True) -> Probability:
    if isinstance(tree, (AtomicEvent, Path)):
        tree = Atomic(tree)
    if isinstance(tree, Atomic):
        if isinstance(tree.event, AtomicEvent):
            return model.marginal(tree.event)
        return prob_path(model, tree.event)
    if isinstance(tree, Node):
        return prob_node(model, tree.children, check_disjoint)
    if isinstance(tree, Branch):
        return prob_branch(model, tree.label, tree.children, check_disjoint)
    raise TypeError(f"not an event tree: {tree!r}")


def prob_node(model: ProbabilityModel, children: Sequence, check_disjoint: bool = True) -> Probability:
    """Probability of the union of pairwise disjoint children.

    The disjointness check enumerates worlds. It can be skipped in float
    mode only; exact mode always performs it.
    """
    children = [Atomic(c) if isinstance(c, (AtomicEvent, Path)) else c for c in children]
    if check_disjoint or model.exact:
        _check_disjoint(model, children)
    total = 0
    for c in children:
        total += prob_tree(model, c, check_disjoint)
    return total


def prob_branch(
    model: ProbabilityModel,
    label: AtomicEvent,
    children: Sequence,
    check_disjoint: bool = True,
) -> Probability:
    children = [Atomic(c) if isinstance(c, (AtomicEvent, Path)) else c for c in children]
    for c in children:
        if label.component in _components(c):
            raise DependentLabel(f"branch label {label} shares its component with a child")
    return model.marginal(label) * prob_node(model, children, check_disjoint)


def prob_generate(
    model: ProbabilityModel,
    levels: Sequence[Sequence[AtomicEvent]],
    last: Sequence[AtomicEvent],
) -> Probability:
    """Probability of a complete generated tree: product of per-level sums."""
    return prod(sum(prob_list(model, level)) for level in [list(last), *levels])
