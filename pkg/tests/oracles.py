"""Brute-force reference implementations, deliberately free of numpy and of the package.

Events are frozensets of state indices here, so nothing is shared with the
bitmask code under test.  Running this file rewrites ``frozen_oracles.json``.
"""

from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from pathlib import Path

FROZEN = Path(__file__).with_name("frozen_oracles.json")


def powerset(states):
    states = list(states)
    for r in range(len(states) + 1):
        for combo in itertools.combinations(states, r):
            yield frozenset(combo)


def close(family, op):
    fam = set(family)
    while True:
        new = {op(a, b) for a in fam for b in fam} - fam
        if not new:
            return fam
        fam |= new


def verification_value(family, beliefs, util):
    n = len(util)
    total = 0
    for s in range(n):
        best = max(min(util[i] for i in e) for e in family if s in e)
        total += beliefs[s] * best
    return total


def obfuscation_value(family, beliefs, util):
    n = len(util)
    total = 0
    for s in range(n):
        worst = min(max(util[i] for i in e) for e in family if s in e)
        total += beliefs[s] * worst
    return total


def capacity(family, beliefs, n, model):
    """Value of the indicator act of every event, from the definitions."""
    out = {}
    for f in powerset(range(n)):
        util = [1 if i in f else 0 for i in range(n)]
        value = verification_value if model == "verification" else obfuscation_value
        out[f] = value(family, beliefs, util)
    return out


def mobius(nu, n):
    return {
        e: sum((-1) ** (len(e) - len(a)) * nu[a] for a in powerset(e))
        for e in powerset(range(n))
    }


def zeta(m, n):
    return {e: sum(m[a] for a in powerset(e)) for e in powerset(range(n))}


def choquet(nu, x):
    """Level-set definition: Σ_k (x_(k) − x_(k+1)) nu({x ≥ x_(k)}) for x ≥ 0."""
    levels = sorted(set(x), reverse=True) + [0]
    return sum((levels[k] - levels[k + 1]) * nu[frozenset(i for i, v in enumerate(x) if v >= levels[k])]
               for k in range(len(levels) - 1))


def to_mask(e):
    return sum(1 << i for i in e)


def _fractions(values):
    return [Fraction(v).limit_denominator(10**6) for v in values]


def fixed_cases():
    rng = random.Random(7)
    cases = [
        {"name": "ccr", "n": 3, "family": [[0, 1], [0, 1, 2]], "beliefs": [0.2, 0.6, 0.2],
         "acts": [[70, 70, 10], [60, 100, 10], [40, 40, 40]]},
        {"name": "ccr_with_u", "n": 3, "family": [[0, 1], [2], [0, 1, 2]], "beliefs": [0.2, 0.6, 0.2],
         "acts": [[70, 70, 10], [60, 100, 10], [40, 40, 40]]},
        {"name": "chain", "n": 4, "family": [[0], [0, 1], [0, 1, 2], [0, 1, 2, 3]], "beliefs": [0.1, 0.2, 0.3, 0.4],
         "acts": [[5, 1, 7, 3], [0, 9, 2, 8]]},
    ]
    for k in range(5):
        n = rng.randint(2, 4)
        fam = [sorted(rng.sample(range(n), rng.randint(1, n))) for _ in range(rng.randint(0, 3))] + [list(range(n))]
        w = [rng.randint(1, 9) for _ in range(n)]
        cases.append({
            "name": f"random{k}", "n": n, "family": fam, "beliefs": [x / sum(w) for x in w],
            "acts": [[rng.randint(0, 100) for _ in range(n)] for _ in range(3)],
        })
    return cases


def freeze():
    out = []
    for case in fixed_cases():
        n = case["n"]
        fam = close([frozenset(e) for e in case["family"]], lambda a, b: a & b)
        b = _fractions(case["beliefs"])
        entry = dict(case)
        entry["closed_family"] = sorted(to_mask(e) for e in fam)
        entry["verification"] = [float(verification_value(fam, b, a)) for a in case["acts"]]
        entry["obfuscation"] = [float(obfuscation_value(fam, b, a)) for a in case["acts"]]
        entry["expected"] = [float(sum(p * x for p, x in zip(b, a))) for a in case["acts"]]
        for model in ("verification", "obfuscation"):
            nu = capacity(fam, b, n, model)
            m = mobius(nu, n)
            entry[f"{model}_capacity"] = {str(to_mask(e)): float(v) for e, v in nu.items()}
            entry[f"{model}_mobius"] = {str(to_mask(e)): float(v) for e, v in m.items()}
            entry[f"{model}_choquet"] = [float(choquet(nu, a)) for a in case["acts"]]
        out.append(entry)
    FROZEN.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    freeze()
