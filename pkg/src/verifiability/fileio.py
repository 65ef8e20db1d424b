"""JSON readers and writers for scenarios, capacities and event families.

Every schema problem is raised as :class:`ValidationError` carrying the
offending field path (or line and column for malformed JSON).
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .decision import MODELS, Act, Scenario, UtilitySpec
from .errors import ValidationError
from .lattice import EventFamily, StateSpace
from .setfunc import SetFunction

SCENARIO_KEYS = {"states", "acts", "utility", "beliefs", "verifiable", "model", "tolerance"}


def parse_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{exc.msg} at line {exc.lineno} column {exc.colno}", source) from None


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_json(text, str(path))


def dump_json(obj) -> str:
    """Deterministic rendering used for every machine-readable report."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValidationError("expected a finite number", path)
    return float(value)


def _object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError("expected an object", path)
    return value


def _states(value, path: str = "states") -> StateSpace:
    if not isinstance(value, list):
        raise ValidationError("expected a list of state labels", path)
    return StateSpace(tuple(value))


def _per_state(space: StateSpace, value, path: str) -> np.ndarray:
    value = _object(value, path)
    extra = sorted(set(value) - set(space.names))
    if extra:
        raise ValidationError(f"unknown state {extra[0]!r}", f"{path}.{extra[0]}")
    out = np.zeros(space.n)
    for i, name in enumerate(space.names):
        if name not in value:
            raise ValidationError("missing entry", f"{path}.{name}")
        out[i] = _number(value[name], f"{path}.{name}")
    return out


def family_from_json(space: StateSpace, value, path: str = "verifiable") -> EventFamily:
    if not isinstance(value, list):
        raise ValidationError("expected a list of events", path)
    events = []
    for j, group in enumerate(value):
        if not isinstance(group, list) or not all(isinstance(x, str) for x in group):
            raise ValidationError("event must be a list of state labels", f"{path}[{j}]")
        try:
            events.append(space.event(group))
        except ValidationError as exc:
            raise ValidationError(str(exc), f"{path}[{j}]") from None
    return EventFamily(events)


def utility_from_json(value, path: str = "utility") -> UtilitySpec:
    value = _object(value, path)
    kind = value.get("kind")
    if kind == "identity":
        return UtilitySpec.identity()
    if kind == "power":
        return UtilitySpec.power(_number(value.get("exponent"), f"{path}.exponent"))
    if kind == "table":
        table = _object(value.get("map"), f"{path}.map")
        pairs = {}
        for key, v in table.items():
            try:
                x = float(key)
            except ValueError:
                raise ValidationError("table keys must be numbers", f"{path}.map.{key}") from None
            pairs[x] = _number(v, f"{path}.map.{key}")
        return UtilitySpec.from_table(pairs)
    raise ValidationError("kind must be identity, power or table", f"{path}.kind")


def utility_to_json(u: UtilitySpec) -> dict:
    if u.scale != 1.0 or u.offset != 0.0:
        raise ValidationError("only unscaled utilities have a file form")
    if u.kind == "identity":
        return {"kind": "identity"}
    if u.kind == "power":
        return {"kind": "power", "exponent": u.exponent}
    return {"kind": "table", "map": {f"{k:g}": v for k, v in u.table}}


def scenario_from_json(data, model: str | None = None, tolerance: float | None = None) -> Scenario:
    data = _object(data, "$")
    extra = sorted(set(data) - SCENARIO_KEYS)
    if extra:
        raise ValidationError("unknown field", extra[0])
    for key in ("states", "acts", "utility", "beliefs", "verifiable"):
        if key not in data:
            raise ValidationError("required field missing", key)
    space = _states(data["states"])
    acts_json = _object(data["acts"], "acts")
    if not acts_json:
        raise ValidationError("at least one act is required", "acts")
    acts = tuple(Act(name, _per_state(space, row, f"acts.{name}")) for name, row in acts_json.items())
    chosen_model = model if model is not None else data.get("model", "verification")
    if chosen_model not in MODELS:
        raise ValidationError(f"model must be one of {', '.join(MODELS)}", "model")
    tol = tolerance if tolerance is not None else data.get("tolerance", 1e-9)
    tol = _number(tol, "tolerance")
    return Scenario(
        space=space,
        acts=acts,
        utility=utility_from_json(data["utility"]),
        beliefs=_per_state(space, data["beliefs"], "beliefs"),
        verifiable=family_from_json(space, data["verifiable"]),
        model=chosen_model,
        tolerance=tol,
    )


def scenario_to_json(sc: Scenario) -> dict:
    sp = sc.space
    return {
        "states": list(sp.names),
        "acts": {a.name: dict(zip(sp.names, a.payoff)) for a in sc.acts},
        "utility": utility_to_json(sc.utility),
        "beliefs": dict(zip(sp.names, (float(p) for p in sc.beliefs))),
        "verifiable": sc.verifiable.without_empty().to_labels(sp),
        "model": sc.model,
        "tolerance": sc.tolerance,
    }


def load_scenario(path, model: str | None = None, tolerance: float | None = None) -> Scenario:
    return scenario_from_json(read_json(path), model, tolerance)


def capacity_key(space: StateSpace, event: int) -> str:
    return ",".join(space.sorted_labels(event))


def capacity_from_json(data) -> SetFunction:
    data = _object(data, "$")
    space = _states(data.get("states"))
    values_json = _object(data.get("values"), "values")
    by_key = {capacity_key(space, e): e for e in range(1 << space.n)}
    values = np.zeros(1 << space.n)
    for key, v in values_json.items():
        canon = ",".join(sorted(key.split(","))) if key else ""
        if canon not in by_key:
            raise ValidationError("not an event of the declared states", f"values.{key}")
        values[by_key[canon]] = _number(v, f"values.{key}")
    if "" in values_json and values[0] != 0:
        raise ValidationError("the empty event must have value 0", "values.")
    for key, e in by_key.items():
        if e and key not in {",".join(sorted(k.split(","))) for k in values_json}:
            raise ValidationError("missing value for event", f"values.{key}")
    return SetFunction(space, values)


def capacity_to_json(f: SetFunction) -> dict:
    sp = f.space
    return {
        "states": list(sp.names),
        "values": {capacity_key(sp, e): float(f.values[e]) for e in range(1, 1 << sp.n)},
    }


def load_capacity(path) -> SetFunction:
    return capacity_from_json(read_json(path))


def load_family(path, space: StateSpace) -> EventFamily:
    data = read_json(path)
    if isinstance(data, dict):
        if "verifiable" not in data:
            raise ValidationError("required field missing", "verifiable")
        data = data["verifiable"]
    return family_from_json(space, data)


def load_beliefs(path, space: StateSpace) -> np.ndarray:
    data = read_json(path)
    if isinstance(data, dict) and "beliefs" in data and isinstance(data["beliefs"], dict):
        data = data["beliefs"]
    beliefs = _per_state(space, data, "beliefs")
    if np.any(beliefs < 0) or abs(beliefs.sum() - 1) > 1e-12:
        raise ValidationError("beliefs must be non-negative and sum to 1", "beliefs")
    return beliefs


def bundled_ccr(model: str | None = None) -> Scenario:
    """The carbon-reduction example shipped with the package."""
    text = resources.files("verifiability").joinpath("data/ccr.json").read_text(encoding="utf-8")
    return scenario_from_json(parse_json(text, "ccr.json"), model)


def bundled_ccr_path() -> Path:
    return Path(str(resources.files("verifiability").joinpath("data/ccr.json")))
