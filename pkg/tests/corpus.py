"""Seeded scenario corpus shared by the property and acceptance suites."""

from __future__ import annotations

import numpy as np

from verifiability import Act, EventFamily, Scenario, StateSpace, UtilitySpec

CORPUS_SEED = 20240521
UTILITIES = (UtilitySpec.identity(), UtilitySpec.power(0.5), UtilitySpec.power(2.0))


def random_pi_system(rng: np.random.Generator, n: int) -> EventFamily:
    full = (1 << n) - 1
    k = int(rng.integers(0, 5))
    events = [int(e) for e in rng.integers(1, full + 1, size=k)]
    return EventFamily(events + [full])


def random_scenario(rng: np.random.Generator, model: str) -> Scenario:
    n = int(rng.integers(2, 5))
    space = StateSpace(tuple("stuvw"[:n]))
    weights = rng.integers(1, 21, size=n).astype(float)
    acts = tuple(Act(f"a{j}", rng.integers(0, 101, size=n)) for j in range(3))
    return Scenario(
        space=space,
        acts=acts,
        utility=UTILITIES[int(rng.integers(len(UTILITIES)))],
        beliefs=weights / weights.sum(),
        verifiable=random_pi_system(rng, n),
        model=model,
    )


def corpus(count: int = 200, seed: int = CORPUS_SEED) -> list[Scenario]:
    """``count`` verification scenarios followed by ``count`` obfuscation scenarios."""
    rng = np.random.default_rng(seed)
    out = [random_scenario(rng, "verification") for _ in range(count)]
    out += [random_scenario(rng, "obfuscation") for _ in range(count)]
    return out
