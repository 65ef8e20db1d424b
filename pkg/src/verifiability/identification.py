"""Recovering verifiable events and beliefs from a capacity.

A verification capacity has non-negative Möbius mass, and the mass sits on
the minimal verifiable events of states with positive belief.  From the
mass we read off the core family, the map from each state to its smallest
core event, and an equivalent belief vector that spreads each core event's
mass evenly over the states mapped to it.

Critical events are tested state by state: E is min-increasing when removing
any single state from E strictly lowers the capacity, and max-increasing when
adding any single state outside E strictly raises it.  For monotone set
functions this is the same as quantifying over every non-empty sub-event.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .decision import Act, Scenario, UtilitySpec
from .errors import NotVerificationCapacity, ValidationError
from .lattice import (
    Event,
    EventFamily,
    StateSpace,
    close_under_union,
    complement,
    is_subset,
    members,
    subsets,
)
from .setfunc import DEFAULT_TOL, SetFunction, dual_capacity, mobius_transform


def induced_capacity(sc: Scenario, model: str | None = None) -> SetFunction:
    """nu(F) = model value of the act with utility 1 on F and 0 off F."""
    model = model or sc.model
    space = sc.space
    n = space.n
    allf = np.arange(1 << n)
    if model == "expected_utility":
        return SetFunction.additive(space, sc.beliefs)
    events = sc.verifiable.nonempty()
    values = np.zeros(1 << n)
    for s in range(n):
        if sc.beliefs[s] == 0:
            continue
        mine = [e for e in events if e >> s & 1]
        if model == "verification":
            # some verifiable E ∋ s lies inside F
            hit = np.zeros(1 << n, dtype=bool)
            for e in mine:
                hit |= (allf & e) == e
        elif model == "obfuscation":
            # every verifiable E ∋ s meets F
            hit = np.ones(1 << n, dtype=bool)
            for e in mine:
                hit &= (allf & e) != 0
        else:
            raise ValidationError(f"unknown model {model!r}", "model")
        values += sc.beliefs[s] * hit
    return SetFunction(space, values)


@dataclass(frozen=True, eq=False)
class IdentificationResult:
    space: StateSpace
    verifiable_core: EventFamily
    union_closure: EventFamily
    phi: tuple[Optional[Event], ...]
    eta: np.ndarray
    irrelevant_states: Event
    mass: np.ndarray

    @property
    def support(self) -> Event:
        return self.space.full & ~self.irrelevant_states

    def to_dict(self) -> dict:
        sp = self.space
        return {
            "verifiable_core": self.verifiable_core.to_labels(sp),
            "union_closure": self.union_closure.to_labels(sp),
            "phi": {
                sp.names[i]: (None if e is None else sp.sorted_labels(e)) for i, e in enumerate(self.phi)
            },
            "eta": {sp.names[i]: float(p) for i, p in enumerate(self.eta)},
            "irrelevant_states": sp.sorted_labels(self.irrelevant_states),
        }


def recover_structure(nu: SetFunction, tol: float = DEFAULT_TOL) -> IdentificationResult:
    space = nu.space
    n = space.n
    if not nu.is_capacity():
        raise NotVerificationCapacity("not a verification capacity: input is not a capacity")
    mass = mobius_transform(nu).mass
    core = EventFamily(int(e) for e in np.flatnonzero(mass > tol) if e)
    support = 0
    for e in core:
        support |= e
    for e in subsets(support):
        if e and mass[e] < -tol:
            raise NotVerificationCapacity(
                f"not a verification capacity: Möbius mass {mass[e]:.3g} on {space.format(e)}"
            )

    phi: list[Optional[Event]] = [None] * n
    ambiguous = set()
    for s in range(n):
        if not support >> s & 1:
            continue
        holding = [e for e in core if e >> s & 1]
        minimal = [e for e in holding if not any(f != e and is_subset(f, e) for f in holding)]
        phi[s] = minimal[0]
        if len(minimal) > 1:
            # only possible for a state with zero belief in every representation
            ambiguous.add(s)

    eta = np.zeros(n)
    for e in core:
        owners = [s for s in members(e) if phi[s] == e and s not in ambiguous]
        if not owners:
            raise NotVerificationCapacity(
                f"not a verification capacity: no state has {space.format(e)} as its smallest core event"
            )
        for s in owners:
            eta[s] = mass[e] / len(owners)
    eta.setflags(write=False)
    mass = mass.copy()
    mass.setflags(write=False)
    return IdentificationResult(
        space=space,
        verifiable_core=core,
        union_closure=close_under_union(core) if len(core) else EventFamily(),
        phi=tuple(phi),
        eta=eta,
        irrelevant_states=space.full & ~support,
        mass=mass,
    )


def rebuild_scenario(result: IdentificationResult, like: Scenario, model: str | None = None) -> Scenario:
    """Scenario with the recovered beliefs and verifiable events = core plus the full set."""
    family = list(result.verifiable_core) + [result.space.full]
    return like.with_(beliefs=result.eta, verifiable=EventFamily(family), model=model or like.model)


def identify(sc: Scenario) -> IdentificationResult:
    """Recover the structure of a scenario's own preference.

    Obfuscation preferences are read through the dual capacity, which is the
    verification capacity with the same events and beliefs.
    """
    nu = induced_capacity(sc)
    if sc.model == "obfuscation":
        nu = dual_capacity(nu)
    return recover_structure(nu, sc.tolerance)


def within_model_class(nu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    """True when ``nu`` is exactly the capacity of some expected verification utility."""
    try:
        res = recover_structure(nu, tol)
    except NotVerificationCapacity:
        return False
    rebuilt = verification_capacity(res.space, list(res.verifiable_core) + [res.space.full], res.eta)
    return rebuilt.allclose(nu, tol)


def verification_capacity(space: StateSpace, family: Sequence[Event], beliefs) -> SetFunction:

    sc = Scenario(
        space=space,
        acts=(Act.constant(0.0, space.n),),
        utility=UtilitySpec(),
        beliefs=np.asarray(beliefs, dtype=float),
        verifiable=EventFamily(family),
        model="verification",
    )
    return induced_capacity(sc)


def _min_increasing_mask(nu: SetFunction, tol: float) -> np.ndarray:
    n = nu.space.n
    v = nu.values
    allf = np.arange(1 << n)
    ok = allf != 0
    for i in range(n):
        bit = 1 << i
        has = (allf & bit) != 0
        drop = v[allf] - v[allf & ~bit]
        ok &= ~has | (drop > tol)
    return ok


def _brute_min_increasing(nu: SetFunction, event: Event, tol: float) -> bool:
    if event == 0:
        return False
    top = nu(event)
    return all(top > nu(event & ~f) + tol for f in subsets(event) if f)


def is_min_increasing(nu: SetFunction, event: Event, tol: float = DEFAULT_TOL) -> bool:
    """Removing any non-empty part of ``event`` strictly lowers nu; ∅ never qualifies."""
    return _brute_min_increasing(nu, nu.space.check(event), tol)


def is_max_increasing(nu: SetFunction, event: Event, tol: float = DEFAULT_TOL) -> bool:
    """Adding any non-empty part of the complement strictly raises nu; the full set never qualifies."""
    event = nu.space.check(event)
    rest = complement(event, nu.space.n)
    if rest == 0:
        return False
    base = nu(event)
    return all(nu(event | f) > base + tol for f in subsets(rest) if f)


def critical_family(nu: SetFunction, mode: str = "min", tol: float = DEFAULT_TOL) -> EventFamily:
    if mode not in ("min", "max"):
        raise ValidationError("mode must be 'min' or 'max'")
    n = nu.space.n
    if mode == "max":
        # E max-increasing for nu  ⇔  Ē min-increasing for the dual
        dual = critical_family(dual_capacity(nu), "min", tol)
        return EventFamily(complement(e, n) for e in dual)
    if nu.is_monotone():
        mask = _min_increasing_mask(nu, tol)
        return EventFamily(int(e) for e in np.flatnonzero(mask))
    return EventFamily(e for e in nu.space.events() if _brute_min_increasing(nu, e, tol))


def event_weight(beliefs, event: Event) -> float:
    return float(sum(beliefs[i] for i in members(event)))


def same_preferences(
    first: tuple[IdentificationResult, Sequence[float]],
    second: tuple[IdentificationResult, Sequence[float]],
    utilities: tuple[Sequence[float], Sequence[float]] | None = None,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Whether two verification representations describe the same preference.

    Each argument pairs an identification result with the belief vector of
    the representation.  With ``utilities`` (the two utility functions
    sampled on a common consequence grid) the positive-affine relation
    between them is also required.
    """
    r1, b1 = first
    r2, b2 = second
    if r1.space != r2.space:
        raise ValidationError("representations live on different state spaces")
    c1, c2 = r1.union_closure.without_empty(), r2.union_closure.without_empty()
    if c1 != c2:
        return False
    n = r1.space.n
    for e in c1:
        ebar = complement(e, n)
        if abs(event_weight(b1, e) - event_weight(b2, e)) > tol:
            return False
        if abs(event_weight(b1, ebar) - event_weight(b2, ebar)) > tol:
            return False
    if utilities is not None:
        return positively_affine(*utilities, tol=tol)
    return True


def positively_affine(u1, u2, tol: float = DEFAULT_TOL) -> bool:
    """u1 = a·u2 + b with a > 0 on the sampled points."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    if u1.shape != u2.shape or u1.size < 2:
        raise ValidationError("need two equally long utility samples with at least two points")
    spread = np.ptp(u2)
    if spread == 0:
        return bool(np.ptp(u1) <= tol)
    theta, phi = np.polyfit(u2, u1, 1)
    scale = max(1.0, float(np.max(np.abs(u1))))
    return bool(theta > 0 and np.all(np.abs(theta * u2 + phi - u1) <= tol * scale))
