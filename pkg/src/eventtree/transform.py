"""Reduction and partitioning of path lists.

Paths are addressed by their position in the list. A reduction removes a
complete cylinder (a block of paths whose union is fully determined by a few
conditional events) and puts the conditional-event path in its place; a
partition picks paths out by index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    EmptyIndexList,
    EventTreeError,
    IndexOutOfRange,
    NotDescending,
    ReductionError,
)
from .sample_space import ConcreteEvent, oracle_prob
from .tree import AtomicEvent, Path, resolve


@dataclass(frozen=True)
class ReductionSpec:
    """Paths to collapse (strictly descending) and their conditional events."""

    indices: tuple[int, ...]
    conditional: tuple[AtomicEvent, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "conditional", tuple(self.conditional))

    def check(self, length: int) -> None:
        n = self.indices
        if not n:
            raise EmptyIndexList("reduction needs at least one path index")
        for a, b in zip(n, n[1:]):
            if not a > b:
                raise NotDescending(f"indices {list(n)} are not strictly descending")
        for i in n:
            if not 0 <= i < length:
                raise IndexOutOfRange(f"path index {i} outside list of {length} paths")


@dataclass(frozen=True)
class PartitionSpec:
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))


def path_event(model, p: Path) -> ConcreteEvent:
    """Worlds where every event of ``p`` holds; the empty path is the full space."""
    return resolve(model, Path(p))


def reduce(ps: Sequence[Path], spec: ReductionSpec) -> list[Path]:
    """Delete all but the last listed path and overwrite that one with the CE path."""
    spec.check(len(ps))
    out = list(ps)
    for i in spec.indices[:-1]:
        del out[i]
    out[spec.indices[-1]] = Path(spec.conditional)
    return out


def reduce_many(ps: Sequence[Path], specs: Sequence[ReductionSpec]) -> list[Path]:
    """Apply reductions left to right; each spec indexes the list as it stands."""
    out = list(ps)
    for step, spec in enumerate(specs):
        try:
            out = reduce(out, spec)
        except EventTreeError as exc:
            raise ReductionError(step, exc) from exc
    return out


def partition(spec: PartitionSpec | Sequence[int], ps: Sequence[Path]) -> list[Path]:
    indices = spec.indices if isinstance(spec, PartitionSpec) else tuple(spec)
    out = []
    for i in indices:
        if not 0 <= i < len(ps):
            raise IndexOutOfRange(f"path index {i} outside list of {len(ps)} paths")
        out.append(ps[i])
    return out


def is_complete_cylinder(model, ps: Sequence[Path], spec: ReductionSpec) -> bool:
    """True when the collapsed paths cover the CE event up to a null set.

    Worlds of zero mass (e.g. an unused null state) are ignored.
    """
    spec.check(len(ps))
    covered = frozenset().union(*(path_event(model, ps[i]) for i in spec.indices))
    target = path_event(model, Path(spec.conditional))
    return oracle_prob(getattr(model, "world", model), covered ^ target) == 0
