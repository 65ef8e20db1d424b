"""Finite state spaces, events as bitmasks, and event families.

An event is a plain ``int`` whose bit ``i`` is set when state ``i`` belongs
to it.  Families are immutable, deduplicated and kept in canonical order
(popcount ascending, then numeric value ascending).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError

MAX_STATES = 16

Event = int


@dataclass(frozen=True)
class StateSpace:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= MAX_STATES:
            raise ValidationError(f"need 1..{MAX_STATES} states, got {len(names)}", "states")
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise ValidationError("state labels must be non-empty strings", f"states[{i}]")
        if len(set(names)) != len(names):
            raise ValidationError("state labels must be unique", "states")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> Event:
        return (1 << self.n) - 1

    def __len__(self):
        return self.n

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise ValidationError(f"unknown state {label!r}") from None

    def event(self, labels: Iterable[str]) -> Event:
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels(self, event: Event) -> list[str]:
        """Labels of ``event`` in state order."""
        self.check(event)
        return [self.names[i] for i in members(event)]

    def sorted_labels(self, event: Event) -> list[str]:
        return sorted(self.labels(event))

    def check(self, event: Event) -> Event:
        if event < 0 or event >> self.n:
            raise ValidationError(f"event {event:#b} has bits outside a {self.n}-state space")
        return event

    def events(self) -> range:
        """Every event, ∅ through the full set, in bitmask order."""
        return range(1 << self.n)

    def format(self, event: Event) -> str:
        return "{" + ",".join(self.labels(event)) + "}"


def popcount(event: Event) -> int:
    return event.bit_count()


def members(event: Event) -> Iterator[int]:
    i = 0
    while event:
        if event & 1:
            yield i
        event >>= 1
        i += 1


def is_subset(a: Event, b: Event) -> bool:
    return a & ~b == 0


def complement(event: Event, n: int) -> Event:
    return ((1 << n) - 1) & ~event


def subsets(event: Event) -> Iterator[Event]:
    """All subsets of ``event`` including ∅ and ``event`` itself."""
    sub = event
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & event


def canonical_key(event: Event) -> tuple[int, int]:
    return (popcount(event), event)


class EventFamily:
    """An immutable set of events in canonical order."""

    __slots__ = ("_members", "_set")

    def __init__(self, events: Iterable[Event] = ()):
        unique = set(int(e) for e in events)
        if any(e < 0 for e in unique):
            raise ValidationError("events must be non-negative bitmasks")
        self._members = tuple(sorted(unique, key=canonical_key))
        self._set = frozenset(unique)

    @classmethod
    def from_labels(cls, space: StateSpace, groups: Iterable[Iterable[str]]) -> "EventFamily":
        return cls(space.event(g) for g in groups)

    @classmethod
    def power_set(cls, space: StateSpace, include_empty: bool = False) -> "EventFamily":
        start = 0 if include_empty else 1
        return cls(range(start, 1 << space.n))

    @property
    def members(self) -> tuple[Event, ...]:
        return self._members

    def nonempty(self) -> tuple[Event, ...]:
        return tuple(e for e in self._members if e)

    def __iter__(self):
        return iter(self._members)

    def __len__(self):
        return len(self._members)

    def __contains__(self, event):
        return event in self._set

    def __eq__(self, other):
        if not isinstance(other, EventFamily):
            return NotImplemented
        return self._members == other._members

    def __hash__(self):
        return hash(self._members)

    def __le__(self, other: "EventFamily") -> bool:
        return self._set <= other._set

    def __lt__(self, other: "EventFamily") -> bool:
        return self._set < other._set

    def __or__(self, other: "EventFamily") -> "EventFamily":
        return EventFamily(self._set | other._set)

    def without_empty(self) -> "EventFamily":
        return EventFamily(self.nonempty())

    def to_labels(self, space: StateSpace) -> list[list[str]]:
        return [space.sorted_labels(e) for e in self._members]

    def format(self, space: StateSpace) -> str:
        return "{" + ", ".join(space.format(e) for e in self._members) + "}"

    def __repr__(self):
        return f"EventFamily({[bin(e) for e in self._members]})"


def _close(family: EventFamily | Sequence[Event], op) -> EventFamily:
    known = set(family)
    if not known:
        raise ValidationError("cannot close an empty family")
    frontier = list(known)
    while frontier:
        fresh = []
        snapshot = list(known)
        for a in frontier:
            for b in snapshot:
                c = op(a, b)
                if c not in known:
                    known.add(c)
                    fresh.append(c)
        frontier = fresh
    return EventFamily(known)


def close_under_intersection(family) -> EventFamily:
    """Smallest superset of ``family`` closed under pairwise intersection."""
    return _close(family, lambda a, b: a & b)


def close_under_union(family) -> EventFamily:
    """Smallest superset of ``family`` closed under pairwise union."""
    return _close(family, lambda a, b: a | b)


def is_pi_system_with_support(family, support: Event) -> bool:
    members_ = set(family)
    if support not in members_:
        return False
    return all((a & b) in members_ for a in members_ for b in members_)
