"""Set functions on the subset lattice of a finite state space.

Values are stored densely: ``values[E]`` is the value at the event whose
bitmask is ``E``.  The zeta and Möbius transforms run in O(n 2^n) using the
in-place subset-sum recursion, one pass per state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .lattice import Event, EventFamily, StateSpace

VALIDITY_TOL = 1e-12
DEFAULT_TOL = 1e-9


def _frozen(values, size: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != (size,):
        raise ValidationError(f"expected {size} values, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SetFunction:
    space: StateSpace
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 1 << self.space.n))

    def __call__(self, event: Event) -> float:
        return float(self.values[event])

    @classmethod
    def from_mapping(cls, space: StateSpace, mapping: Mapping[Event, float]) -> "SetFunction":
        values = np.zeros(1 << space.n)
        for event, value in mapping.items():
            values[space.check(event)] = value
        return cls(space, values)

    @classmethod
    def additive(cls, space: StateSpace, atoms) -> "SetFunction":
        atoms = np.asarray(atoms, dtype=float)
        return zeta_transform(MobiusVector.from_mapping(space, {1 << i: p for i, p in enumerate(atoms)}))

    @classmethod
    def min_capacity(cls, space: StateSpace) -> "SetFunction":
        """1 on the full set, 0 elsewhere."""
        values = np.zeros(1 << space.n)
        values[space.full] = 1.0
        return cls(space, values)

    @classmethod
    def max_capacity(cls, space: StateSpace) -> "SetFunction":
        """1 on every non-empty event."""
        values = np.ones(1 << space.n)
        values[0] = 0.0
        return cls(space, values)

    def is_grounded(self, tol: float = VALIDITY_TOL) -> bool:
        return abs(self.values[0]) <= tol

    def is_normalized(self, tol: float = VALIDITY_TOL) -> bool:
        return abs(self.values[self.space.full] - 1.0) <= tol

    def is_monotone(self, tol: float = VALIDITY_TOL) -> bool:
        # single-state additions suffice
        v = self.values
        for i in range(self.space.n):
            blocks = v.reshape(-1, 2, 1 << i)
            if np.any(blocks[:, 1, :] < blocks[:, 0, :] - tol):
                return False
        return True

    def is_capacity(self, tol: float = VALIDITY_TOL) -> bool:
        return self.is_grounded(tol) and self.is_normalized(tol) and self.is_monotone(tol)

    def dual(self) -> "SetFunction":
        return dual_capacity(self)

    def allclose(self, other: "SetFunction", tol: float = DEFAULT_TOL) -> bool:
        return self.space == other.space and bool(np.all(np.abs(self.values - other.values) <= tol))


@dataclass(frozen=True, eq=False)
class MobiusVector:
    space: StateSpace
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", _frozen(self.mass, 1 << self.space.n))

    def __call__(self, event: Event) -> float:
        return float(self.mass[event])

    @classmethod
    def from_mapping(cls, space: StateSpace, mapping: Mapping[Event, float]) -> "MobiusVector":
        mass = np.zeros(1 << space.n)
        for event, value in mapping.items():
            mass[space.check(event)] += value
        return cls(space, mass)

    def support(self, tol: float = DEFAULT_TOL) -> EventFamily:
        return EventFamily(int(e) for e in np.flatnonzero(self.mass > tol))


def _subset_sum(arr: np.ndarray, n: int, sign: float) -> np.ndarray:
    out = np.array(arr, dtype=float)
    for i in range(n):
        blocks = out.reshape(-1, 2, 1 << i)
        blocks[:, 1, :] += sign * blocks[:, 0, :]
    return out


def zeta_transform(m: MobiusVector) -> SetFunction:
    """values[E] = sum of mass[A] over A ⊆ E."""
    return SetFunction(m.space, _subset_sum(m.mass, m.space.n, 1.0))


def mobius_transform(f: SetFunction) -> MobiusVector:
    """Inverse of :func:`zeta_transform` (sign ``(-1)^{|E|-|A|}``)."""
    return MobiusVector(f.space, _subset_sum(f.values, f.space.n, -1.0))


def dual_capacity(f: SetFunction) -> SetFunction:
    """f*(A) = 1 - f(complement of A)."""
    full = f.space.full
    idx = np.arange(1 << f.space.n) ^ full
    return SetFunction(f.space, 1.0 - f.values[idx])


def modularity_gaps(f: SetFunction, domain=None) -> np.ndarray:
    """f(E∪F) + f(E∩F) - f(E) - f(F) for every ordered pair of the domain."""
    if domain is None:
        events = np.arange(1 << f.space.n)
    else:
        events = np.fromiter((f.space.check(e) for e in domain), dtype=np.int64)
    v = f.values
    e = events[:, None]
    g = events[None, :]
    return v[e | g] + v[e & g] - v[e] - v[g]


def classify_modularity(f: SetFunction, domain=None, tol: float = DEFAULT_TOL) -> str:
    """One of ``modular``, ``supermodular``, ``submodular``, ``neither``.

    ``domain`` defaults to the full lattice.
    """
    gaps = modularity_gaps(f, domain)
    sup = bool(np.all(gaps >= -tol))
    sub = bool(np.all(gaps <= tol))
    if sup and sub:
        return "modular"
    if sup:
        return "supermodular"
    if sub:
        return "submodular"
    return "neither"


def subset_minima(x) -> np.ndarray:
    """mins[E] = min of x over E; mins[∅] = +inf."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    mins = np.full(x.shape[:-1] + (1 << n,), np.inf)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        mins[..., lo:hi] = np.minimum(mins[..., 0:lo], x[..., i : i + 1])
    return mins


def choquet_sorted(f: SetFunction, payoff) -> float:
    """Choquet integral by decreasing level sets; no capacity check."""
    x = np.asarray(payoff, dtype=float)
    order = np.argsort(-x, kind="stable")
    total = 0.0
    prev_set, prev_val = 0, 0.0
    for i in order:
        cur = prev_set | (1 << int(i))
        val = f.values[cur]
        total += x[i] * (val - prev_val)
        prev_set, prev_val = cur, val
    return float(total)


def choquet_mobius(m: MobiusVector, payoff) -> float:
    """Σ_E m(E) · min_{s∈E} payoff(s)."""
    mins = subset_minima(payoff)
    mins[0] = 0.0
    return float(np.dot(m.mass, mins))


def choquet_integral(f: SetFunction, payoff, tol: float = DEFAULT_TOL) -> float:
    x = np.asarray(payoff, dtype=float)
    if x.shape != (f.space.n,):
        raise ValidationError(f"payoff must have {f.space.n} entries")
    if not f.is_capacity():
        raise ValidationError("choquet_integral needs a capacity (grounded, normalized, monotone)")
    by_sort = choquet_sorted(f, x)
    by_mass = choquet_mobius(mobius_transform(f), x)
    scale = max(1.0, float(np.max(np.abs(x))))
    if abs(by_sort - by_mass) > tol * scale:
        raise ArithmeticError(f"Choquet routes disagree: {by_sort} vs {by_mass}")
    return by_sort
