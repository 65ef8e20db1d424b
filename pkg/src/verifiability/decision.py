"""Acts, utilities, scenarios and the three evaluation functionals.

The verification functional credits each state with the best worst-case
utility over the verifiable events containing it; the obfuscation functional
credits each state with the worst best-case utility.  Both are computed from
a per-state value matrix so that many acts can be evaluated at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .lattice import (
    Event,
    EventFamily,
    StateSpace,
    close_under_intersection,
    is_pi_system_with_support,
    members,
)

MODELS = ("verification", "obfuscation", "expected_utility")
BELIEF_TOL = 1e-12


@dataclass(frozen=True)
class Act:
    name: str
    payoff: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "payoff", tuple(float(x) for x in self.payoff))

    def __len__(self):
        return len(self.payoff)

    def as_array(self) -> np.ndarray:
        return np.array(self.payoff)

    @classmethod
    def constant(cls, x: float, n: int, name: str | None = None) -> "Act":
        return cls(name or f"const({x:g})", (x,) * n)

    @classmethod
    def binary(cls, good: float, event: Event, bad: float, n: int, name: str | None = None) -> "Act":
        """The act paying ``good`` on ``event`` and ``bad`` elsewhere."""
        payoff = tuple(good if event >> i & 1 else bad for i in range(n))
        return cls(name or f"{good:g}_{event:b}_{bad:g}", payoff)

    def composite(self, other: "Act", event: Event, name: str | None = None) -> "Act":
        """Agrees with self on ``event`` and with ``other`` off it."""
        payoff = tuple(a if event >> i & 1 else b for i, (a, b) in enumerate(zip(self.payoff, other.payoff)))
        return Act(name or f"{self.name}_E_{other.name}", payoff)

    def bumped(self, state: int, delta: float, name: str | None = None) -> "Act":
        payoff = list(self.payoff)
        payoff[state] += delta
        return Act(name or f"{self.name}'", tuple(payoff))


@dataclass(frozen=True)
class UtilitySpec:
    """u(x) = scale * base(x) + offset.

    ``base`` is the identity, a sign-preserving power ``sign(x)|x|^exponent``,
    or a lookup table.  ``scale`` may be negative only to build the reversed
    utility used by the verification/obfuscation duality.
    """

    kind: str = "identity"
    exponent: float | None = None
    table: tuple[tuple[float, float], ...] = ()
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in ("identity", "power", "table"):
            raise ValidationError(f"unknown utility kind {self.kind!r}", "utility.kind")
        if self.kind == "power":
            if self.exponent is None or not self.exponent > 0:
                raise ValidationError("power utility needs exponent > 0", "utility.exponent")
        if self.kind == "table":
            table = tuple(sorted((float(k), float(v)) for k, v in dict(self.table).items()))
            if not table:
                raise ValidationError("table utility needs at least one entry", "utility.map")
            utils = [v for _, v in table]
            if any(b <= a for a, b in zip(utils, utils[1:])):
                raise ValidationError("table utility must be strictly increasing", "utility.map")
            object.__setattr__(self, "table", table)
        if self.scale == 0 or not math.isfinite(self.scale):
            raise ValidationError("utility scale must be finite and non-zero", "utility.scale")

    @classmethod
    def identity(cls) -> "UtilitySpec":
        return cls()

    @classmethod
    def power(cls, exponent: float) -> "UtilitySpec":
        return cls("power", exponent=exponent)

    @classmethod
    def from_table(cls, mapping) -> "UtilitySpec":
        return cls("table", table=tuple(dict(mapping).items()))

    @property
    def increasing(self) -> bool:
        return self.scale > 0

    def negated(self) -> "UtilitySpec":
        return replace(self, scale=-self.scale, offset=-self.offset)

    def affine(self, theta: float, phi: float) -> "UtilitySpec":
        """theta * u + phi."""
        return replace(self, scale=theta * self.scale, offset=theta * self.offset + phi)

    def _base(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return x
        if self.kind == "power":
            return np.sign(x) * np.abs(x) ** self.exponent
        keys = np.array([k for k, _ in self.table])
        vals = np.array([v for _, v in self.table])
        pos = np.searchsorted(keys, x)
        pos = np.clip(pos, 0, len(keys) - 1)
        hit = np.isclose(keys[pos], x, rtol=0, atol=1e-9)
        if not np.all(hit):
            missing = np.asarray(x)[~hit].ravel()[0]
            raise ValidationError(f"consequence {missing:g} not in utility table", "utility.map")
        return vals[pos]

    def _base_inverse(self, v: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return v
        if self.kind == "power":
            return np.sign(v) * np.abs(v) ** (1.0 / self.exponent)
        keys = np.array([k for k, _ in self.table])
        vals = np.array([v_ for _, v_ in self.table])
        pos = np.clip(np.searchsorted(vals, v), 0, len(vals) - 1)
        near = np.clip(pos - 1, 0, len(vals) - 1)
        pick = np.where(np.abs(vals[near] - v) < np.abs(vals[pos] - v), near, pos)
        if not np.all(np.isclose(vals[pick], v, rtol=0, atol=1e-9)):
            raise ValidationError("midpoint not representable in utility table", "utility.map")
        return keys[pick]

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.scale * self._base(arr) + self.offset
        return float(out) if out.ndim == 0 else out

    def inverse(self, v):
        arr = (np.asarray(v, dtype=float) - self.offset) / self.scale
        out = self._base_inverse(arr)
        return float(out) if np.ndim(out) == 0 else out

    def consequences(self) -> tuple[float, ...]:
        """Representable consequences for table utilities, empty otherwise."""
        return tuple(k for k, _ in self.table)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A validated decision problem.

    ``verifiable`` is stored after intersection closure.
    """

    space: StateSpace
    acts: tuple[Act, ...]
    utility: UtilitySpec
    beliefs: np.ndarray
    verifiable: EventFamily
    model: str = "verification"
    tolerance: float = 1e-9

    def __post_init__(self):
        n = self.space.n
        acts = tuple(self.acts)
        object.__setattr__(self, "acts", acts)
        if not acts:
            raise ValidationError("at least one act is required", "acts")
        names = set()
        for act in acts:
            if len(act) != n:
                raise ValidationError(f"payoff needs {n} entries, got {len(act)}", f"acts.{act.name}")
            if act.name in names:
                raise ValidationError("duplicate act name", f"acts.{act.name}")
            names.add(act.name)
            for i, x in enumerate(act.payoff):
                if not math.isfinite(x):
                    raise ValidationError("payoff must be finite", f"acts.{act.name}.{self.space.names[i]}")
        beliefs = np.array(self.beliefs, dtype=float)
        if beliefs.shape != (n,):
            raise ValidationError(f"need {n} belief entries", "beliefs")
        for i, p in enumerate(beliefs):
            if not (math.isfinite(p) and p >= 0):
                raise ValidationError("belief must be a non-negative number", f"beliefs.{self.space.names[i]}")
        if abs(beliefs.sum() - 1.0) > BELIEF_TOL:
            raise ValidationError(f"beliefs sum to {beliefs.sum()!r}, not 1", "beliefs")
        beliefs.setflags(write=False)
        object.__setattr__(self, "beliefs", beliefs)
        if self.model not in MODELS:
            raise ValidationError(f"model must be one of {MODELS}", "model")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive", "tolerance")
        family = list(self.verifiable)
        if not family:
            raise ValidationError("verifiable family is empty", "verifiable")
        for j, e in enumerate(family):
            try:
                self.space.check(e)
            except ValidationError as exc:
                raise ValidationError(str(exc), f"verifiable[{j}]") from None
        closed = close_under_intersection(family)
        if not is_pi_system_with_support(closed, self.space.full):
            raise ValidationError("verifiable family must contain the full state set", "verifiable")
        object.__setattr__(self, "verifiable", closed)
        if self.utility.kind == "table":
            for act in acts:
                self.utility(act.as_array())

    def act(self, name: str) -> Act:
        for a in self.acts:
            if a.name == name:
                return a
        raise KeyError(name)

    def with_(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def utilities(self, acts) -> np.ndarray:
        """Utility matrix (k, n) for a sequence of acts or payoff rows."""
        rows = [a.payoff if isinstance(a, Act) else a for a in acts]
        return np.atleast_2d(self.utility(np.asarray(rows, dtype=float)))

    def payoff_range(self) -> tuple[float, float]:
        allp = np.array([a.payoff for a in self.acts])
        return float(allp.min()), float(allp.max())


def state_values(family: EventFamily, util: np.ndarray, mode: str) -> np.ndarray:
    """Per-state inner values for a batch of utility rows.

    mode ``verification``: max over E∋s of min over E.
    mode ``obfuscation``: min over E∋s of max over E.
    ∅ is skipped.
    """
    util = np.atleast_2d(np.asarray(util, dtype=float))
    k, n = util.shape
    if mode == "expected_utility":
        return util.copy()
    if mode == "verification":
        out = np.full((k, n), -np.inf)
        inner, outer = np.min, np.maximum
    elif mode == "obfuscation":
        out = np.full((k, n), np.inf)
        inner, outer = np.max, np.minimum
    else:
        raise ValidationError(f"unknown model {mode!r}")
    for event in family.nonempty():
        idx = list(members(event))
        val = inner(util[:, idx], axis=1)
        out[:, idx] = outer(out[:, idx], val[:, None])
    if not np.all(np.isfinite(out)):
        raise ValidationError("some state is not covered by any verifiable event", "verifiable")
    return out


def evaluate_utilities(family: EventFamily, beliefs, util, mode: str) -> np.ndarray:
    return state_values(family, util, mode) @ np.asarray(beliefs, dtype=float)


def _single(sc: Scenario, act: Act, mode: str, utility: UtilitySpec | None = None) -> float:
    u = utility or sc.utility
    util = np.atleast_2d(u(act.as_array()))
    return float(evaluate_utilities(sc.verifiable, sc.beliefs, util, mode)[0])


def verification_utility(sc: Scenario, act: Act) -> float:
    return _single(sc, act, "verification")


def obfuscation_utility(sc: Scenario, act: Act) -> float:
    return _single(sc, act, "obfuscation")


def expected_utility(sc: Scenario, act: Act, beliefs=None) -> float:
    b = sc.beliefs if beliefs is None else np.asarray(beliefs, dtype=float)
    return float(np.dot(b, sc.utility(act.as_array())))


def model_utility(sc: Scenario, act: Act, model: str | None = None) -> float:
    return _single(sc, act, model or sc.model)


def model_values(sc: Scenario, acts: Sequence[Act] | None = None, model: str | None = None) -> np.ndarray:
    acts = sc.acts if acts is None else acts
    return evaluate_utilities(sc.verifiable, sc.beliefs, sc.utilities(acts), model or sc.model)


def binary_weight(sc: Scenario, event: Event, model: str | None = None) -> float:
    """Model value of the act with utility 1 on ``event`` and 0 elsewhere."""
    n = sc.space.n
    indicator = np.array([[1.0 if event >> i & 1 else 0.0 for i in range(n)]])
    return float(evaluate_utilities(sc.verifiable, sc.beliefs, indicator, model or sc.model)[0])


def evaluate_binary(sc: Scenario, good: float, event: Event, bad: float) -> float:
    """w·u(good) + (1 − w)·u(bad), where w is the weight the model gives the event."""
    ug, ub = sc.utility(good), sc.utility(bad)
    if ug < ub:
        raise ValidationError("evaluate_binary needs u(good) >= u(bad)")
    w = binary_weight(sc, sc.space.check(event))
    return w * ug + (1.0 - w) * ub


def preference_average(sc: Scenario, x, y):
    """Consequence (or pointwise act) whose utility is the midpoint of u(x), u(y)."""
    if isinstance(x, Act):
        mid = sc.utility.inverse((sc.utility(x.as_array()) + sc.utility(y.as_array())) / 2)
        return Act(f"avg({x.name},{y.name})", tuple(np.atleast_1d(mid)))
    if x == y:
        return x
    return sc.utility.inverse((sc.utility(x) + sc.utility(y)) / 2)


def certainty_equivalent(sc: Scenario, act: Act, model: str | None = None) -> float:
    return sc.utility.inverse(model_utility(sc, act, model))
