"""Recursive event-tree values and complete-tree generation.

An event tree is built from three constructors:

* ``Atomic(e)``: a single event (or a path, i.e. the conjunction of events),
* ``Node(children)``: the union of its children,
* ``Branch(label, children)``: ``label`` intersected with the union of its
  children.

Children are ordered. Order does not affect probabilities but fixes the
depth-first, left-to-right leaf numbering that reduction and partitioning
rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import NonAtomicHead
from .sample_space import ConcreteEvent, WorldModel

UP = "up"
DOWN = "down"


@dataclass(frozen=True, order=True)
class AtomicEvent:
    component: str
    state: str

    def __str__(self):
        return f"{self.component}:{self.state}"

    @classmethod
    def parse(cls, text: str) -> "AtomicEvent":
        component, sep, state = text.rpartition(":")
        if not sep or not component or not state:
            raise ValueError(f"expected 'component:state', got {text!r}")
        return cls(component, state)


def up(component: str) -> AtomicEvent:
    return AtomicEvent(component, UP)


def down(component: str) -> AtomicEvent:
    return AtomicEvent(component, DOWN)


@dataclass(frozen=True)
class Path:
    """One scenario: an ordered sequence of atomic events."""

    events: tuple[AtomicEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def __str__(self):
        return "[" + ", ".join(map(str, self.events)) + "]"

    @property
    def components(self) -> list[str]:
        return [e.component for e in self.events]


@dataclass(frozen=True)
class Atomic:
    event: Union[AtomicEvent, Path]


@dataclass(frozen=True)
class Node:
    children: tuple["EventTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Branch:
    label: AtomicEvent
    children: tuple["EventTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


EventTree = Union[Atomic, Node, Branch]


def _world(model) -> WorldModel:
    return getattr(model, "world", model)


def resolve(model, event: Union[AtomicEvent, Path]) -> ConcreteEvent:
    """Concrete worlds of an atomic event or of a path (the intersection)."""
    world = _world(model)
    if isinstance(event, AtomicEvent):
        return world.event(event.component, event.state)
    acc = world.full
    for e in event:
        acc = acc & world.event(e.component, e.state)
    return acc


def semantics(model, tree: EventTree) -> ConcreteEvent:
    """Set of worlds denoted by ``tree``.

    Empty ``Node`` and ``Branch`` lists denote the empty event.
    """
    if isinstance(tree, Atomic):
        return resolve(model, tree.event)
    if isinstance(tree, Node):
        return frozenset().union(*(semantics(model, c) for c in tree.children))
    if isinstance(tree, Branch):
        if not tree.children:
            return frozenset()
        inner = frozenset().union(*(semantics(model, c) for c in tree.children))
        return resolve(model, tree.label) & inner
    raise TypeError(f"not an event tree: {tree!r}")


def _lift(item) -> EventTree:
    if isinstance(item, (AtomicEvent, Path)):
        return Atomic(item)
    return item


def branch_product(l1: Iterable, l2: Iterable) -> list[EventTree]:
    """Branch every head of ``l1`` onto the whole of ``l2``."""
    children = tuple(_lift(t) for t in l2)
    out = []
    for h in l1:
        h = _lift(h)
        if not isinstance(h, Atomic) or not isinstance(h.event, AtomicEvent):
            raise NonAtomicHead(f"branch heads must be atomic events, got {h!r}")
        out.append(Branch(h.event, children))
    return out


def generate(levels: Sequence[Iterable], last: Iterable) -> list[EventTree]:
    """Complete event tree: right fold of :func:`branch_product` seeded by ``last``."""
    acc = [_lift(t) for t in last]
    for level in reversed(levels):
        acc = branch_product(level, acc)
    return acc


def paths(levels: Sequence[Iterable[AtomicEvent]], last: Iterable[AtomicEvent]) -> list[Path]:
    """Every scenario of the complete tree, in its leaf order."""
    acc = [Path((e,)) for e in last]
    for level in reversed(levels):
        acc = [Path((h,) + p.events) for h in level for p in acc]
    return acc


def wrap_atomic(items: Iterable[Union[AtomicEvent, Path]]) -> list[Atomic]:
    return [Atomic(x) for x in items]


def tree_paths(trees: Iterable[EventTree]) -> list[Path]:
    """Leaf scenarios of a forest, depth-first, left to right.

    Empty branches contribute nothing since they denote the empty event.
    """
    out = []
    for t in trees:
        if isinstance(t, Atomic):
            out.append(t.event if isinstance(t.event, Path) else Path((t.event,)))
        elif isinstance(t, Node):
            out.extend(tree_paths(t.children))
        else:
            out.extend(Path((t.label,) + p.events) for p in tree_paths(t.children))
    return out


def fold_paths(ps: Sequence[Path]) -> list[EventTree]:
    """Rebuild a branching forest from a path list.

    Consecutive paths sharing a first event are grouped under one ``Branch``;
    a path whose remainder is a single event becomes an ``Atomic`` leaf. This
    is the inverse of :func:`tree_paths` and turns a reduced path list back
    into the familiar diagram shape.
    """
    out: list[EventTree] = []
    i = 0
    ps = list(ps)
    while i < len(ps):
        p = ps[i]
        if len(p) == 0:
            out.append(Atomic(Path()))
            i += 1
            continue
        head = p[0]
        j = i
        while j < len(ps) and len(ps[j]) and ps[j][0] == head:
            j += 1
        group = ps[i:j]
        if len(group) == 1 and len(p) == 1:
            out.append(Atomic(head))
        else:
            out.append(Branch(head, fold_paths([Path(q.events[1:]) for q in group])))
        i = j
    return out


def leaf_count(tree: EventTree) -> int:
    if isinstance(tree, Atomic):
        return 1
    if not tree.children:
        return 1 if isinstance(tree, Branch) else 0
    return sum(leaf_count(c) for c in tree.children)
