"""Welfare and transparency losses, witness searches for when they misbehave, comparative statics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .decision import Act, Scenario, UtilitySpec, model_values, state_values
from .errors import PreconditionError, SearchExhausted, ValidationError
from .identification import recover_structure
from .lattice import EventFamily, StateSpace, close_under_intersection, close_under_union, subsets
from .setfunc import DEFAULT_TOL, SetFunction

DEFAULT_BELIEF_STEPS = 10


@dataclass(frozen=True)
class Choice:
    act: str
    value: float


@dataclass
class LossReport:
    eu_best: Choice
    model_best: Choice
    model_best_eu: float
    loss: float
    model: str
    model_values: dict
    expected_utilities: dict
    transparency_delta: Optional[float] = None

    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "eu_best": {"act": self.eu_best.act, "value": self.eu_best.value},
            "model_best": {
                "act": self.model_best.act,
                "value": self.model_best.value,
                "expected_utility": self.model_best_eu,
            },
            "loss": self.loss,
            "model_values": self.model_values,
            "expected_utilities": self.expected_utilities,
        }
        if self.transparency_delta is not None:
            out["transparency_delta"] = self.transparency_delta
        return out


def _menu(sc: Scenario, menu) -> tuple[Act, ...]:
    if menu is None:
        return sc.acts
    acts = tuple(sc.act(a) if isinstance(a, str) else a for a in menu)
    if not acts:
        raise ValidationError("menu must contain at least one act", "menu")
    return acts


def _true_beliefs(sc: Scenario, true_beliefs) -> np.ndarray:
    if true_beliefs is None:
        return sc.beliefs
    b = np.asarray(true_beliefs, dtype=float)
    if b.shape != (sc.space.n,) or np.any(b < 0) or abs(b.sum() - 1) > 1e-12:
        raise ValidationError("true beliefs must be a probability vector over the states", "true_beliefs")
    return b


def welfare_loss(sc: Scenario, menu=None, true_beliefs=None, model: str | None = None) -> LossReport:
    """Expected-utility shortfall of the act the model picks from ``menu``."""
    model = model or sc.model
    acts = _menu(sc, menu)
    values = model_values(sc, acts, model)
    ordered = np.sort(values)
    if np.any(np.diff(ordered) <= sc.tolerance):
        raise PreconditionError("menu not strict: two acts have model values within tolerance")
    beliefs = _true_beliefs(sc, true_beliefs)
    eu = sc.utilities(acts) @ beliefs
    pick = int(np.argmax(values))
    best = int(np.argmax(eu))
    return LossReport(
        eu_best=Choice(acts[best].name, float(eu[best])),
        model_best=Choice(acts[pick].name, float(values[pick])),
        model_best_eu=float(eu[pick]),
        loss=float(eu[best] - eu[pick]),
        model=model,
        model_values={a.name: float(v) for a, v in zip(acts, values)},
        expected_utilities={a.name: float(v) for a, v in zip(acts, eu)},
    )


def _union_core(space: StateSpace, family) -> EventFamily:
    closed = close_under_intersection(list(family) + [space.full])
    return close_under_union(closed.without_empty())


def transparency_loss(sc: Scenario, menu, richer, true_beliefs=None) -> float:
    """Loss under the scenario's verifiable events minus the loss under ``richer``."""
    richer = EventFamily(richer)
    if not _union_core(sc.space, sc.verifiable) <= _union_core(sc.space, richer):
        raise PreconditionError("richer family does not contain the union closure of the scenario's events")
    coarse = welfare_loss(sc, menu, true_beliefs)
    fine = welfare_loss(sc.with_(verifiable=EventFamily(list(richer) + [sc.space.full])), menu, true_beliefs)
    return coarse.loss - fine.loss


def simplex_lattice(n: int, steps: int = DEFAULT_BELIEF_STEPS) -> np.ndarray:
    """Interior belief vectors with coordinates k/steps, k ≥ 1, in lexicographic order."""
    if steps < n:
        raise ValidationError(f"need at least {n} belief steps for {n} states")
    rows = [c + (steps - sum(c),) for c in itertools.product(range(1, steps), repeat=n - 1) if sum(c) < steps]
    return np.array(sorted(rows), dtype=float) / steps


def default_payoff_grid(step: float = 10.0, lo: float = 0.0, hi: float = 100.0) -> np.ndarray:
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def _grid_payoffs(grid, n: int) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if len(grid) ** n > 20_000:
        raise ValidationError(f"grid of {len(grid)} points gives too many acts for {n} states")
    return np.array(list(itertools.product(grid, repeat=n)))


def _pairwise_pick(values: np.ndarray, tol: float):
    """(strict, first-wins) matrices for every ordered pair of acts."""
    d = values[:, None] - values[None, :]
    return np.abs(d) > tol, d > 0


@dataclass
class MenuWitness:
    menu: tuple[Act, Act]
    beliefs: tuple[float, ...]
    transparency: float

    def to_dict(self, space: StateSpace) -> dict:
        return {
            "menu": [{"name": a.name, "payoff": dict(zip(space.names, a.payoff))} for a in self.menu],
            "beliefs": dict(zip(space.names, self.beliefs)),
            "transparency_loss": self.transparency,
        }


@dataclass
class IndeterminacyWitnesses:
    negative: MenuWitness
    positive: MenuWitness

    def to_dict(self, space: StateSpace) -> dict:
        return {"negative": self.negative.to_dict(space), "positive": self.positive.to_dict(space)}


def _witness_scenario(space, utility, family, beliefs, acts, model, tol) -> Scenario:
    return Scenario(space, acts, utility, beliefs, EventFamily(list(family) + [space.full]), model, tol)


def find_indeterminacy_witnesses(
    space: StateSpace,
    utility: UtilitySpec,
    family,
    richer,
    grid=None,
    model: str = "verification",
    belief_steps: int = DEFAULT_BELIEF_STEPS,
    tol: float = DEFAULT_TOL,
) -> IndeterminacyWitnesses:
    """Two-act menus whose transparency loss is negative and positive.

    Menus are searched over every pair of grid acts, beliefs over the
    interior simplex lattice, both in lexicographic order; the first hit
    wins.
    """
    coarse = close_under_intersection(list(family) + [space.full])
    fine = close_under_intersection(list(richer) + [space.full])
    c1, c2 = _union_core(space, coarse), _union_core(space, fine)
    if not c1 < c2:
        raise PreconditionError("the coarser family's union closure must be strictly inside the richer one's")
    if c2 == EventFamily.power_set(space):
        raise PreconditionError("the richer family must not make every event verifiable")
    grid = default_payoff_grid() if grid is None else np.asarray(grid, dtype=float)
    payoffs = _grid_payoffs(grid, space.n)
    util = utility(payoffs)
    ps1 = state_values(coarse, util, model)
    ps2 = state_values(fine, util, model)
    upper = np.triu(np.ones((len(util), len(util)), dtype=bool), 1)
    found: dict[str, MenuWitness] = {}
    for beliefs in simplex_lattice(space.n, belief_steps):
        eu = util @ beliefs
        s1, w1 = _pairwise_pick(ps1 @ beliefs, tol)
        s2, w2 = _pairwise_pick(ps2 @ beliefs, tol)
        se, we = _pairwise_pick(eu, tol)
        base = upper & s1 & s2 & se
        right1, right2 = w1 == we, w2 == we
        for sign, mask in (("negative", base & right1 & ~right2), ("positive", base & ~right1 & right2)):
            if sign in found or not mask.any():
                continue
            i, j = (int(k) for k in np.argwhere(mask)[0])
            acts = (Act("a", payoffs[i]), Act("b", payoffs[j]))
            sc = _witness_scenario(space, utility, coarse, beliefs, acts, model, tol)
            t = transparency_loss(sc, None, fine)
            found[sign] = MenuWitness(acts, tuple(float(p) for p in beliefs), t)
        if len(found) == 2:
            return IndeterminacyWitnesses(found["negative"], found["positive"])
    raise SearchExhausted("not found at this grid resolution")


@dataclass
class VOLossWitnesses:
    verification_loses: tuple[Act, Act]
    obfuscation_loses: tuple[Act, Act]
    beliefs: tuple[float, ...]
    losses: dict

    def to_dict(self, space: StateSpace) -> dict:
        def menu(acts):
            return [{"name": a.name, "payoff": dict(zip(space.names, a.payoff))} for a in acts]

        return {
            "kind": "witnesses",
            "verification_loses": menu(self.verification_loses),
            "obfuscation_loses": menu(self.obfuscation_loses),
            "beliefs": dict(zip(space.names, self.beliefs)),
            "losses": self.losses,
        }


@dataclass
class VOCertificate:
    """Every singleton is verifiable: both models coincide with expected utility."""

    samples_checked: int

    def to_dict(self, space: StateSpace) -> dict:
        return {"kind": "certificate", "statement": "both losses are always 0", "samples_checked": self.samples_checked}


def find_vo_loss_witnesses(
    space: StateSpace,
    utility: UtilitySpec,
    family,
    grid=None,
    belief_steps: int = DEFAULT_BELIEF_STEPS,
    tol: float = DEFAULT_TOL,
) -> VOLossWitnesses | VOCertificate:
    """Either a certificate that neither model ever loses, or menus on which each loses alone."""
    closed = close_under_intersection(list(family) + [space.full])
    grid = default_payoff_grid() if grid is None else np.asarray(grid, dtype=float)
    payoffs = _grid_payoffs(grid, space.n)
    util = utility(payoffs)
    beliefs_grid = simplex_lattice(space.n, belief_steps)
    ver = state_values(closed, util, "verification")
    obf = state_values(closed, util, "obfuscation")

    if all((1 << i) in closed for i in range(space.n)):
        eu = util @ beliefs_grid.T
        if not (np.allclose(ver @ beliefs_grid.T, eu, atol=tol) and np.allclose(obf @ beliefs_grid.T, eu, atol=tol)):
            raise ArithmeticError("models differ from expected utility under full verifiability")
        return VOCertificate(int(eu.size))

    upper = np.triu(np.ones((len(util), len(util)), dtype=bool), 1)
    for beliefs in beliefs_grid:
        sv, wv = _pairwise_pick(ver @ beliefs, tol)
        so, wo = _pairwise_pick(obf @ beliefs, tol)
        se, we = _pairwise_pick(util @ beliefs, tol)
        base = upper & sv & so & se
        v_wrong = base & (wv != we) & (wo == we)
        o_wrong = base & (wo != we) & (wv == we)
        if not (v_wrong.any() and o_wrong.any()):
            continue
        menus = []
        for mask in (v_wrong, o_wrong):
            i, j = (int(k) for k in np.argwhere(mask)[0])
            menus.append((Act("a", payoffs[i]), Act("b", payoffs[j])))
        losses = {}
        for label, acts in zip(("verification_loses", "obfuscation_loses"), menus):
            sc = _witness_scenario(space, utility, closed, beliefs, acts, "verification", tol)
            losses[label] = {
                "verification": welfare_loss(sc).loss,
                "obfuscation": welfare_loss(sc, model="obfuscation").loss,
            }
        return VOLossWitnesses(menus[0], menus[1], tuple(float(p) for p in beliefs), losses)
    raise SearchExhausted("not found at this grid resolution")


def compare_risk_aversion(u1: UtilitySpec, u2: UtilitySpec, grid, tol: float = DEFAULT_TOL) -> str:
    """How risk averse ``u2`` is relative to ``u1``: more, less, equal or incomparable.

    Reads the shape of u2 as a function of u1 along the sorted grid: concave
    means more risk averse, convex less, affine equal.
    """
    grid = np.unique(np.asarray(grid, dtype=float))
    if len(grid) < 2:
        raise ValidationError("need at least two grid points")
    x, y = np.atleast_1d(u1(grid)), np.atleast_1d(u2(grid))
    if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
        raise ValidationError("utilities must be strictly increasing on the grid")
    slopes = np.diff(y) / np.diff(x)
    change = np.diff(slopes)
    scale = tol * max(1.0, float(np.max(np.abs(slopes))))
    concave = bool(np.all(change <= scale))
    convex = bool(np.all(change >= -scale))
    if concave and convex:
        return "equal"
    if concave:
        return "more"
    if convex:
        return "less"
    return "incomparable"


def _flat_implication(stable: SetFunction, follows: SetFunction, tol: float) -> bool:
    """stable(E) = stable(E−F) implies follows(E) = follows(E−F), for all F ⊆ E."""
    n = stable.space.n
    for e in range(1 << n):
        for f in subsets(e):
            if not f:
                continue
            rest = e & ~f
            if abs(stable(e) - stable(rest)) <= tol and abs(follows(e) - follows(rest)) > tol:
                return False
    return True


def compare_verifiability(nu1: SetFunction, nu2: SetFunction, tol: float = DEFAULT_TOL) -> str:
    """subset when the first preference has fewer verifiable events, and so on.

    Both capacities must be verification capacities on the same states with
    the same payoff-relevant states.  The answer from the recovered union
    closures is cross-checked against the behavioural test and any
    disagreement raises.
    """
    if nu1.space != nu2.space:
        raise ValidationError("capacities live on different state spaces")
    r1, r2 = recover_structure(nu1, tol), recover_structure(nu2, tol)
    if r1.irrelevant_states != r2.irrelevant_states:
        raise PreconditionError("capacities disagree on which states matter")
    c1, c2 = r1.union_closure, r2.union_closure
    by_closure = {(True, True): "equal", (True, False): "subset", (False, True): "superset", (False, False): "incomparable"}
    closure_answer = by_closure[(c1 <= c2, c2 <= c1)]
    behaviour_answer = by_closure[(_flat_implication(nu2, nu1, tol), _flat_implication(nu1, nu2, tol))]
    if closure_answer != behaviour_answer:
        raise ArithmeticError(
            f"closure comparison says {closure_answer} but behaviour says {behaviour_answer}; inputs are outside the model"
        )
    return closure_answer
