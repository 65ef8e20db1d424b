"""Command-line front end.

Every command builds a JSON-ready report; the human output is a plain
rendering of that same report.  Exit codes: 0 success, 1 invalid input,
2 an axiom (or demo claim) failed, 3 a witness search came up empty.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .axioms import check_biseparable_grid, check_critical_event_modularity, check_supermodularity, default_grid, run_axiom_suite
from .decision import MODELS, Act, Scenario, certainty_equivalent, model_values
from .errors import NotVerificationCapacity, PreconditionError, SearchExhausted, ValidationError
from .fileio import (
    bundled_ccr,
    capacity_from_json,
    dump_json,
    load_beliefs,
    load_family,
    read_json,
    scenario_from_json,
)
from .identification import identify, induced_capacity, recover_structure, within_model_class
from .lattice import EventFamily
from .setfunc import SetFunction, dual_capacity
from .welfare import (
    compare_risk_aversion,
    compare_verifiability,
    default_payoff_grid,
    find_indeterminacy_witnesses,
    find_vo_loss_witnesses,
    transparency_loss,
    welfare_loss,
)

EXIT_OK, EXIT_INVALID, EXIT_AXIOM, EXIT_EXHAUSTED = 0, 1, 2, 3


def _r(x: float) -> float:
    """Round away float noise so reports are stable across platforms."""
    return float(round(float(x), 12)) + 0.0


def _load_scenario(args) -> Scenario:
    return scenario_from_json(read_json(args.scenario), args.model, args.tolerance)


def _grid_for(sc: Scenario, step: float | None) -> np.ndarray:
    if step is None:
        return default_grid(sc)
    if not step > 0:
        raise ValidationError("grid step must be positive", "--grid")
    lo, hi = sc.payoff_range()
    count = int(np.floor((hi - lo) / step + 1e-9))
    grid = lo + step * np.arange(count + 1)
    if grid[-1] < hi - 1e-9:
        grid = np.append(grid, hi)
    return grid


def cmd_eval(args) -> tuple[dict, int]:
    sc = _load_scenario(args)
    values = model_values(sc)
    eu = sc.utilities(sc.acts) @ sc.beliefs
    rows = []
    for act, v, e in zip(sc.acts, values, eu):
        rows.append(
            {
                "act": act.name,
                "model_value": _r(v),
                "expected_utility": _r(e),
                "certainty_equivalent": _r(certainty_equivalent(sc, act)),
            }
        )
    top = float(np.max(values))
    best = sorted(a.name for a, v in zip(sc.acts, values) if v >= top - sc.tolerance)
    return {"command": "eval", "model": sc.model, "acts": rows, "best": best}, EXIT_OK


def _load_source(path, args):
    data = read_json(path)
    if isinstance(data, dict) and "values" in data:
        return capacity_from_json(data)
    return scenario_from_json(data, args.model, args.tolerance)


def cmd_identify(args) -> tuple[dict, int]:
    source = _load_source(args.scenario, args)
    if isinstance(source, Scenario):
        result = identify(source)
        nu = induced_capacity(source)
        if source.model == "obfuscation":
            nu = dual_capacity(nu)
        tol = source.tolerance
    else:
        nu = source
        tol = args.tolerance or 1e-9
        result = recover_structure(nu, tol)
    report = {"command": "identify", **_rounded(result.to_dict()), "within_verification_class": within_model_class(nu, tol)}
    return report, EXIT_OK


def cmd_axioms(args) -> tuple[dict, int]:
    source = _load_source(args.scenario, args)
    if isinstance(source, Scenario):
        reports = run_axiom_suite(source, _grid_for(source, args.grid), seed=args.seed)
    else:
        mode = "max" if args.model == "obfuscation" else "min"
        grid = None if args.grid is None else default_payoff_grid(args.grid, 0.0, 1.0)
        reports = [
            check_biseparable_grid(source, grid),
            check_supermodularity(source, "sub" if mode == "max" else "super"),
            check_critical_event_modularity(source, mode),
        ]
    holds = all(r.holds for r in reports)
    report = {"command": "axioms", "all_hold": holds, "reports": [r.to_dict() for r in reports]}
    return report, EXIT_OK if holds else EXIT_AXIOM


def cmd_welfare(args) -> tuple[dict, int]:
    sc = _load_scenario(args)
    grid = _grid_for(sc, args.grid) if args.grid is not None else None
    if args.find_witnesses == "indeterminacy":
        if not args.richer:
            raise ValidationError("--find-witnesses indeterminacy needs --richer", "--richer")
        richer = load_family(args.richer, sc.space)
        found = find_indeterminacy_witnesses(sc.space, sc.utility, sc.verifiable, richer, grid, sc.model)
        return {"command": "welfare", "indeterminacy": found.to_dict(sc.space)}, EXIT_OK
    if args.find_witnesses == "vo":
        found = find_vo_loss_witnesses(sc.space, sc.utility, sc.verifiable, grid)
        return {"command": "welfare", "verification_vs_obfuscation": found.to_dict(sc.space)}, EXIT_OK
    menu = args.menu.split(",") if args.menu else None
    true_beliefs = load_beliefs(args.true_beliefs, sc.space) if args.true_beliefs else None
    loss = welfare_loss(sc, menu, true_beliefs)
    if args.richer:
        richer = load_family(args.richer, sc.space)
        loss.transparency_delta = transparency_loss(sc, menu, richer, true_beliefs)
    return {"command": "welfare", **_rounded(loss.to_dict())}, EXIT_OK


def _rounded(obj):
    if isinstance(obj, float):
        return _r(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_rounded(v) for v in obj]
    return obj


def _verification_view(source) -> SetFunction:
    if isinstance(source, SetFunction):
        return source
    nu = induced_capacity(source)
    return dual_capacity(nu) if source.model == "obfuscation" else nu


def cmd_compare(args) -> tuple[dict, int]:
    first = _load_source(args.first, args)
    second = _load_source(args.second, args)
    report = {"command": "compare", "verifiability": compare_verifiability(_verification_view(first), _verification_view(second))}
    if isinstance(first, Scenario) and isinstance(second, Scenario):
        lo = min(first.payoff_range()[0], second.payoff_range()[0])
        hi = max(first.payoff_range()[1], second.payoff_range()[1])
        if first.utility.kind == "table" or second.utility.kind == "table":
            grid = sorted(set(first.utility.consequences()) & set(second.utility.consequences()))
        else:
            grid = np.linspace(lo, hi, 21)
        report["risk_aversion"] = compare_risk_aversion(first.utility, second.utility, grid)
    return report, EXIT_OK


def demo_claims() -> list[dict]:
    claims = []

    def claim(text, ok, **detail):
        claims.append({"claim": text, "pass": bool(ok), **{k: _rounded(v) for k, v in detail.items()}})

    sc = bundled_ccr()
    names = [a.name for a in sc.acts]
    ver = model_values(sc)
    claim(
        "verification values (Trees, RECs, Efficiency) = (58, 50, 40)",
        np.allclose(ver, [58, 50, 40], atol=1e-9, rtol=0),
        values=dict(zip(names, ver.tolist())),
    )
    obf_sc = sc.with_(model="obfuscation", verifiable=EventFamily(list(sc.verifiable) + [sc.space.event(["u"])]))
    obf = model_values(obf_sc)
    claim(
        "obfuscation values with {u} verifiable = (58, 82, 40)",
        np.allclose(obf, [58, 82, 40], atol=1e-9, rtol=0),
        values=dict(zip(names, obf.tolist())),
    )
    eu = sc.utilities(sc.acts) @ sc.beliefs
    claim("expected utility prefers RECs", names[int(np.argmax(eu))] == "RECs", values=dict(zip(names, eu.tolist())))

    consistent = True
    for p in np.linspace(0, 1, 21):
        beliefs = np.array([p / 2, p / 2, 1 - p])
        vals = model_values(sc.with_(beliefs=beliefs))
        trees_best = vals[0] > max(vals[1], vals[2]) + sc.tolerance
        consistent &= trees_best == (p > 0.5 + 1e-12)
    claim("verification chooses Trees exactly when the belief in {s,t} exceeds 1/2", consistent)

    res = identify(sc)
    claim(
        "identification recovers core {{s,t},{s,t,u}} and beliefs (0.4, 0.4, 0.2)",
        res.verifiable_core.to_labels(sc.space) == [["s", "t"], ["s", "t", "u"]] and np.allclose(res.eta, [0.4, 0.4, 0.2]),
        eta=res.eta.tolist(),
    )
    claim("every applicable axiom holds for the verification scenario", all(r.holds for r in run_axiom_suite(sc)))
    claim("every applicable axiom holds for the obfuscation scenario", all(r.holds for r in run_axiom_suite(obf_sc)))

    trees = sc.act("Trees")
    recs = Act("RECs'", (60.0, 100.0, 10.01))
    full = sc.space.full
    six = Scenario(sc.space, (trees, recs), sc.utility, [0.005, 0.99, 0.005], EventFamily([full]))
    t = transparency_loss(six, None, EventFamily([sc.space.event(["s"]), full]))
    expected = -((0.005 * 60 + 0.99 * 100 + 0.005 * 10.01) - (0.005 * 70 + 0.99 * 70 + 0.005 * 10))
    claim("revealing {s} makes the policy maker worse off (negative transparency loss)", t < 0 and abs(t - expected) < 1e-9,
          transparency_loss=t)
    t_full = transparency_loss(six, None, EventFamily.power_set(sc.space))
    claim("revealing every event never hurts (transparency loss >= 0)", t_full >= -1e-12, transparency_loss=t_full)
    return claims


def cmd_demo(args) -> tuple[dict, int]:
    claims = demo_claims()
    ok = all(c["pass"] for c in claims)
    return {"command": "demo", "claims": claims, "all_pass": ok}, EXIT_OK if ok else EXIT_AXIOM


def _render(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "eval":
        lines.append(f"model: {report['model']}")
        lines.append(f"{'act':<16}{'value':>14}{'EU':>14}{'CE':>14}")
        for row in report["acts"]:
            lines.append(
                f"{row['act']:<16}{row['model_value']:>14.6g}{row['expected_utility']:>14.6g}{row['certainty_equivalent']:>14.6g}"
            )
        lines.append("best: " + ", ".join(report["best"]))
    elif cmd == "demo":
        for c in report["claims"]:
            lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['claim']}")
    elif cmd == "axioms":
        for r in report["reports"]:
            lines.append(f"{'holds' if r['holds'] else 'FAILS':<7}{r['axiom']}  ({r['samples_checked']} checks)")
            for w in r["witnesses"][:3]:
                lines.append(f"        witness: {w}")
    else:
        for key, value in report.items():
            if key not in ("command", "seed"):
                lines.append(f"{key}: {value}")
    lines.append(f"seed: {report['seed']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--model", choices=MODELS, default=None, help="override the scenario's model")
    common.add_argument("--grid", type=float, default=None, help="payoff grid step for searches and axiom checks")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="verifiability", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="value every act of a scenario")
    p.add_argument("scenario")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("identify", parents=[common], help="recover verifiable events and beliefs")
    p.add_argument("scenario", help="scenario or capacity file")
    p.set_defaults(run=cmd_identify)

    p = sub.add_parser("axioms", parents=[common], help="check the representation axioms")
    p.add_argument("scenario", help="scenario or capacity file")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("welfare", parents=[common], help="welfare and transparency loss")
    p.add_argument("scenario")
    p.add_argument("--menu", help="comma-separated act names (default: all acts)")
    p.add_argument("--true-beliefs", dest="true_beliefs")
    p.add_argument("--richer", help="file with the richer verifiable family")
    p.add_argument("--find-witnesses", dest="find_witnesses", choices=("indeterminacy", "vo"))
    p.set_defaults(run=cmd_welfare)

    p = sub.add_parser("compare", parents=[common], help="compare verifiability and risk attitude")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("demo", parents=[common], help="replay the carbon-reduction example")
    p.set_defaults(run=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.run(args)
    except (ValidationError, PreconditionError, NotVerificationCapacity) as exc:
        report, code = {"command": args.command, "error": str(exc)}, EXIT_INVALID
    except SearchExhausted as exc:
        report, code = {"command": args.command, "error": str(exc)}, EXIT_EXHAUSTED
    report["seed"] = args.seed
    if args.json:
        sys.stdout.write(dump_json(report))
    elif "error" in report:
        sys.stderr.write(f"error: {report['error']}\n")
    else:
        sys.stdout.write(_render(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
