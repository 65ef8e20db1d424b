"""Executable axiom checks for scenarios and capacities.

Axioms phrased with preference averages are checked in utility space: the
preference average of two consequences has the midpoint utility, so mixing
two acts with a third averages their utility rows.  No certainty equivalent
has to be constructed, which keeps table utilities usable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .decision import Act, Scenario, UtilitySpec, evaluate_utilities
from .errors import ValidationError
from .identification import critical_family, induced_capacity
from .lattice import EventFamily, complement, subsets
from .setfunc import DEFAULT_TOL, SetFunction, choquet_sorted, dual_capacity, modularity_gaps

MAX_WITNESSES = 20
EXHAUSTIVE_STATES = 3
DEFAULT_SAMPLES = 10_000
MAX_GRID_ACTS = 20_000


@dataclass
class AxiomReport:
    axiom: str
    holds: bool
    witnesses: list = field(default_factory=list)
    samples_checked: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "samples_checked": self.samples_checked,
            "witnesses": self.witnesses,
            "details": self.details,
        }


@dataclass(frozen=True)
class EventClass:
    kind: str  # null | universal | essential
    irrelevant: bool
    weight: float


def default_grid(sc: Scenario, points: int = 5) -> np.ndarray:
    """Evenly spaced consequences over the scenario's payoff range (table keys for table utilities)."""
    if sc.utility.kind == "table":
        return np.array(sc.utility.consequences())
    lo, hi = sc.payoff_range()
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    return np.linspace(lo, hi, points)


def payoff_grid(step: float, lo: float = 0.0, hi: float = 100.0) -> np.ndarray:
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def grid_acts(grid, n: int) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if len(grid) ** n > MAX_GRID_ACTS:
        raise ValidationError(f"grid of {len(grid)} points gives too many acts for {n} states")
    return np.array(list(itertools.product(grid, repeat=n)), dtype=float)


def _evaluator(source, utility: UtilitySpec | None = None) -> tuple[Callable, int, SetFunction]:
    """(utility rows -> values, n, capacity) for a scenario or a bare set function."""
    if isinstance(source, Scenario):
        sc = source
        nu = induced_capacity(sc)
        return (lambda util: evaluate_utilities(sc.verifiable, sc.beliefs, util, sc.model)), sc.space.n, nu
    if isinstance(source, SetFunction):
        nu = source

        def run(util):
            util = np.atleast_2d(util)
            return np.array([choquet_sorted(nu, row) for row in util])

        return run, nu.space.n, nu
    raise TypeError("expected a Scenario or a SetFunction")


def _sign(d, tol):
    return np.where(d > tol, 1, np.where(d < -tol, -1, 0))


def classify_event(sc: Scenario, event, grid=None, tol: float | None = None) -> EventClass:
    tol = sc.tolerance if tol is None else tol
    event = sc.space.check(event)
    grid = default_grid(sc) if grid is None else np.asarray(grid, dtype=float)
    ug = sc.utility(grid)
    if np.ptp(ug) <= tol:
        raise ValidationError("no strictly ranked pair of consequences is representable")
    evaluate, n, _ = _evaluator(sc)
    good, bad = float(np.max(ug)), float(np.min(ug))
    binary = np.where([(event >> i) & 1 for i in range(n)], good, bad)
    u_bin = evaluate(binary)[0]
    weight = (u_bin - bad) / (good - bad)
    if weight <= tol:
        kind = "null"
    elif weight >= 1 - tol:
        kind = "universal"
    else:
        kind = "essential"

    rows = sc.utility(grid_acts(grid, n))
    base = evaluate(rows)
    irrelevant = True
    mask = np.array([(event >> i) & 1 for i in range(n)], dtype=bool)
    for g in ug:
        changed = rows.copy()
        changed[:, mask] = g
        if np.any(np.abs(evaluate(changed) - base) > tol):
            irrelevant = False
            break
    return EventClass(kind, irrelevant, float(weight))


def are_comonotonic(a, b, utility: UtilitySpec | None = None) -> bool:
    u = utility or UtilitySpec()
    ua = u(a.as_array() if isinstance(a, Act) else np.asarray(a, dtype=float))
    ub = u(b.as_array() if isinstance(b, Act) else np.asarray(b, dtype=float))
    da = ua[:, None] - ua[None, :]
    db = ub[:, None] - ub[None, :]
    return not bool(np.any((da > 0) & (db < 0)))


def _order_signs(util: np.ndarray) -> np.ndarray:
    n = util.shape[1]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not pairs:
        return np.zeros((util.shape[0], 0))
    return np.stack([np.sign(util[:, i] - util[:, j]) for i, j in pairs], axis=1)


def comonotonic_matrix(util: np.ndarray) -> np.ndarray:
    d = _order_signs(util)
    pos = (d > 0).astype(float)
    neg = (d < 0).astype(float)
    clash = pos @ neg.T + neg @ pos.T
    return clash == 0


def check_comonotonic_independence(
    sc: Scenario, grid=None, samples: int = DEFAULT_SAMPLES, seed: int = 0, search_non_comonotonic: bool = True
) -> AxiomReport:
    """Mixing two comonotonic acts with a third comonotonic act keeps their ranking.

    Exhaustive over the grid for up to three states; otherwise ``samples``
    random comonotonic triples (three acts sorted along one random ordering
    of the states).  Mixing halves utility differences, so the mixed
    comparison is read at half the tolerance.
    """
    tol = sc.tolerance
    n = sc.space.n
    grid = default_grid(sc) if grid is None else np.asarray(grid, dtype=float)
    evaluate, _, _ = _evaluator(sc)
    report = AxiomReport("comonotonic_independence", True, details={"grid": [float(x) for x in grid]})

    def witness(pa, pb, pc, d, dm):
        return {
            "a": [float(x) for x in pa],
            "b": [float(x) for x in pb],
            "c": [float(x) for x in pc],
            "U(a)-U(b)": float(d),
            "U(mix_a)-U(mix_b)": float(dm),
        }

    if n <= EXHAUSTIVE_STATES:
        payoffs = grid_acts(grid, n)
        util = sc.utility(payoffs)
        values = evaluate(util)
        como = comonotonic_matrix(util)
        checked = 0
        found_outside = None
        for c in range(len(util)):
            keep = np.flatnonzero(como[c])
            sub = como[np.ix_(keep, keep)]
            mixed = evaluate((util[keep] + util[c]) / 2)
            d = values[keep][:, None] - values[keep][None, :]
            dm = mixed[:, None] - mixed[None, :]
            bad = sub & (_sign(d, tol) != _sign(dm, tol / 2))
            checked += int(sub.sum())
            if bad.any() and len(report.witnesses) < MAX_WITNESSES:
                for i, j in zip(*np.nonzero(bad)):
                    if len(report.witnesses) >= MAX_WITNESSES:
                        break
                    report.witnesses.append(witness(payoffs[keep[i]], payoffs[keep[j]], payoffs[c], d[i, j], dm[i, j]))
            if search_non_comonotonic and found_outside is None:
                mixed_all = evaluate((util + util[c]) / 2)
                d_all = values[:, None] - values[None, :]
                dm_all = mixed_all[:, None] - mixed_all[None, :]
                triple_ok = como & como[c][:, None] & como[c][None, :]
                bad_all = ~triple_ok & (_sign(d_all, tol) * _sign(dm_all, tol / 2) < 0)
                if bad_all.any():
                    i, j = np.argwhere(bad_all)[0]
                    found_outside = witness(payoffs[i], payoffs[j], payoffs[c], d_all[i, j], dm_all[i, j])
        report.samples_checked = checked
        report.details["plan"] = "exhaustive"
        if search_non_comonotonic:
            report.details["non_comonotonic_reversal"] = found_outside
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(grid), size=(samples, 3, n))
        idx = -np.sort(-idx, axis=2)
        order = np.argsort(rng.random((samples, n)), axis=1)
        payoffs = np.empty((samples, 3, n))
        np.put_along_axis(payoffs, np.repeat(order[:, None, :], 3, axis=1), grid[idx], axis=2)
        util = sc.utility(payoffs.reshape(-1, n)).reshape(samples, 3, n)
        va = evaluate(util[:, 0])
        vb = evaluate(util[:, 1])
        ma = evaluate((util[:, 0] + util[:, 2]) / 2)
        mb = evaluate((util[:, 1] + util[:, 2]) / 2)
        d, dm = va - vb, ma - mb
        bad = _sign(d, tol) != _sign(dm, tol / 2)
        for k in np.flatnonzero(bad)[:MAX_WITNESSES]:
            report.witnesses.append(witness(payoffs[k, 0], payoffs[k, 1], payoffs[k, 2], d[k], dm[k]))
        report.samples_checked = samples
        report.details.update(plan="random", seed=seed)
    report.holds = not report.witnesses
    return report


def check_supermodularity(source, kind: str | None = None, tol: float | None = None) -> AxiomReport:
    """Capacity form: nu(E∪F) + nu(E∩F) ≥ nu(E) + nu(F) (≤ for ``kind='sub'``) over all event pairs."""
    if kind is None:
        kind = "sub" if isinstance(source, Scenario) and source.model == "obfuscation" else "super"
    if kind not in ("super", "sub"):
        raise ValidationError("kind must be 'super' or 'sub'")
    if tol is None:
        tol = source.tolerance if isinstance(source, Scenario) else DEFAULT_TOL
    nu = induced_capacity(source) if isinstance(source, Scenario) else source
    space = nu.space
    gaps = modularity_gaps(nu)
    bad = gaps < -tol if kind == "super" else gaps > tol
    bad = np.triu(bad)
    report = AxiomReport("supermodularity" if kind == "super" else "submodularity", not bad.any())
    report.samples_checked = int(gaps.size)
    for e, f in np.argwhere(bad)[:MAX_WITNESSES]:
        e, f = int(e), int(f)
        report.witnesses.append(
            {"E": space.sorted_labels(e), "F": space.sorted_labels(f), "gap": float(gaps[e, f])}
        )
    return report


def _min_mode_violations(nu: SetFunction, tol: float):
    """Yield (condition, E, F, A, gap) for min-increasing critical events of ``nu``."""
    crit = critical_family(nu, "min", tol)
    members = crit.members
    seen = set(members)
    checked = 0
    out = []
    for i, e in enumerate(members):
        for f in members[i + 1 :]:
            inter, union = e & f, e | f
            checked += 2
            if inter and inter not in seen:
                out.append(("intersection", e, f, None, None))
            if union not in seen:
                out.append(("union", e, f, None, None))
            for a in subsets(union):
                checked += 1
                gap = nu(a) + nu(a & inter) - nu(a & e) - nu(a & f)
                if abs(gap) > tol:
                    out.append(("modularity", e, f, a, gap))
    return crit, out, checked


def check_critical_event_modularity(nu: SetFunction, mode: str = "min", tol: float = DEFAULT_TOL) -> AxiomReport:
    """For critical E, F: E∩F and E∪F critical, plus the modularity identity.

    min mode, A ⊆ E∪F:  nu(A) + nu(A∩E∩F) = nu(A∩E) + nu(A∩F).
    max mode is the min mode of the dual capacity with every event
    complemented; in terms of nu it reads, for A ⊇ E∩F:
    nu(A) + nu(A∪E∪F) = nu(A∪E) + nu(A∪F).
    """
    space = nu.space
    n = space.n
    if mode == "min":
        crit, raw, checked = _min_mode_violations(nu, tol)
        family = crit
    elif mode == "max":
        crit, raw_dual, checked = _min_mode_violations(dual_capacity(nu), tol)
        family = EventFamily(complement(e, n) for e in crit)
        flip = {"intersection": "union", "union": "intersection", "modularity": "modularity"}
        raw = [
            (
                flip[cond],
                complement(e, n),
                complement(f, n),
                None if a is None else complement(a, n),
                None if gap is None else -gap,
            )
            for cond, e, f, a, gap in raw_dual
        ]
    else:
        raise ValidationError("mode must be 'min' or 'max'")
    raw.sort(key=lambda w: (w[0], w[1], w[2], -1 if w[3] is None else w[3]))
    report = AxiomReport(f"critical_event_modularity[{mode}]", not raw, samples_checked=checked)
    report.details["critical_family"] = family.to_labels(space)
    for cond, e, f, a, gap in raw[:MAX_WITNESSES]:
        w = {"condition": cond, "E": space.sorted_labels(e), "F": space.sorted_labels(f)}
        if a is not None:
            w.update(A=space.sorted_labels(a), gap=float(gap))
        report.witnesses.append(w)
    return report


def check_biseparable_grid(source, grid=None, tol: float | None = None) -> AxiomReport:
    """Dominance and eventwise monotonicity on a finite consequence grid.

    Dominance is checked between grid neighbours (acts differing by one grid
    step in one state); by transitivity this covers every dominated pair.
    A bare set function is evaluated by its Choquet integral with identity
    utility, without insisting that it be a capacity.
    """
    evaluate, n, nu = _evaluator(source)
    if isinstance(source, Scenario):
        tol = source.tolerance if tol is None else tol
        grid = default_grid(source) if grid is None else np.asarray(grid, dtype=float)
        ug = np.unique(source.utility(grid))
        space = source.space
    else:
        tol = DEFAULT_TOL if tol is None else tol
        grid = np.linspace(0, 1, 5) if grid is None else np.asarray(grid, dtype=float)
        ug = np.unique(grid)
        space = source.space
    report = AxiomReport("biseparable_grid", True, details={"grid": [float(x) for x in grid]})
    g = len(ug)

    levels = np.array(list(itertools.product(range(g), repeat=n)))
    if len(levels) > MAX_GRID_ACTS:
        raise ValidationError("grid too fine for dominance scan")
    values = evaluate(ug[levels])
    strides = g ** np.arange(n - 1, -1, -1)
    checked = 0
    for s in range(n):
        up = levels[:, s] < g - 1
        lo_idx = np.flatnonzero(up)
        hi_idx = lo_idx + strides[s]
        checked += len(lo_idx)
        drop = values[hi_idx] < values[lo_idx] - tol
        for k in np.flatnonzero(drop)[: MAX_WITNESSES - len(report.witnesses)]:
            report.witnesses.append(
                {
                    "property": "dominance",
                    "better": [float(x) for x in ug[levels[hi_idx[k]]]],
                    "worse": [float(x) for x in ug[levels[lo_idx[k]]]],
                    "U(better)": float(values[hi_idx[k]]),
                    "U(worse)": float(values[lo_idx[k]]),
                }
            )

    triples = [(x, y, z) for x in ug for y in ug for z in ug if y >= z]
    x, y, z = (np.array(t) for t in zip(*triples))
    null_events = []
    for e in range(1, 1 << n):
        on = np.array([(e >> i) & 1 for i in range(n)], dtype=bool)
        w = nu(e)
        if w <= tol:
            null_events.append(space.sorted_labels(e))
        if w > tol:
            sel = x > y
            a = np.where(on, x[sel, None], z[sel, None])
            b = np.where(on, y[sel, None], z[sel, None])
            d = evaluate(a) - evaluate(b)
            checked += int(sel.sum())
            for k in np.flatnonzero(d <= tol)[: max(0, MAX_WITNESSES - len(report.witnesses))]:
                report.witnesses.append(
                    {"property": "eventwise_nonnull", "E": space.sorted_labels(e),
                     "x": float(x[sel][k]), "y": float(y[sel][k]), "z": float(z[sel][k]), "diff": float(d[k])}
                )
        if w < 1 - tol:
            # off-E improvement while the E consequence stays on top
            sel = (x > z) & (y >= x)
            a = np.where(on, y[sel, None], x[sel, None])
            b = np.where(on, y[sel, None], z[sel, None])
            d = evaluate(a) - evaluate(b)
            checked += int(sel.sum())
            for k in np.flatnonzero(d <= tol)[: max(0, MAX_WITNESSES - len(report.witnesses))]:
                report.witnesses.append(
                    {"property": "eventwise_nonuniversal", "E": space.sorted_labels(e),
                     "x": float(x[sel][k]), "y": float(y[sel][k]), "z": float(z[sel][k]), "diff": float(d[k])}
                )
    report.samples_checked = checked
    report.details["null_events"] = null_events
    report.holds = not report.witnesses
    return report


def run_axiom_suite(sc: Scenario, grid=None, seed: int = 0) -> list[AxiomReport]:
    """The checks that apply to the scenario's model."""
    nu = induced_capacity(sc)
    reports = [
        check_biseparable_grid(sc, grid),
        check_comonotonic_independence(sc, grid, seed=seed, search_non_comonotonic=False),
    ]
    if sc.model == "obfuscation":
        reports.append(check_supermodularity(sc, "sub"))
        reports.append(check_critical_event_modularity(nu, "max", sc.tolerance))
    else:
        reports.append(check_supermodularity(sc, "super"))
        if sc.model == "expected_utility":
            reports.append(check_supermodularity(sc, "sub"))
        reports.append(check_critical_event_modularity(nu, "min", sc.tolerance))
    return reports
