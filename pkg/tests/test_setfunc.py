import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from verifiability import (
    MobiusVector,
    SetFunction,
    StateSpace,
    ValidationError,
    choquet_integral,
    classify_modularity,
    dual_capacity,
    mobius_transform,
    zeta_transform,
)
from verifiability.setfunc import choquet_mobius, choquet_sorted, subset_minima

import oracles

FROZEN = json.loads(oracles.FROZEN.read_text())
SP3 = StateSpace(("s", "t", "u"))


def space(n):
    return StateSpace(tuple(f"x{i}" for i in range(n)))


@pytest.mark.parametrize("case", FROZEN, ids=lambda c: c["name"])
@pytest.mark.parametrize("model", ["verification", "obfuscation"])
def test_mobius_matches_frozen_oracle(case, model):
    sp = space(case["n"])
    nu = SetFunction.from_mapping(sp, {int(k): v for k, v in case[f"{model}_capacity"].items()})
    m = mobius_transform(nu)
    for k, v in case[f"{model}_mobius"].items():
        assert m(int(k)) == pytest.approx(v, abs=1e-12)


@pytest.mark.parametrize("case", FROZEN, ids=lambda c: c["name"])
def test_choquet_matches_frozen_oracle(case):
    sp = space(case["n"])
    nu = SetFunction.from_mapping(sp, {int(k): v for k, v in case["verification_capacity"].items()})
    for act, want in zip(case["acts"], case["verification_choquet"]):
        assert choquet_integral(nu, act) == pytest.approx(want, abs=1e-9)


def test_zeta_of_point_masses():
    m = MobiusVector.from_mapping(SP3, {0b011: 0.8, 0b111: 0.2})
    nu = zeta_transform(m)
    assert nu(0b011) == pytest.approx(0.8)
    assert nu(0b001) == 0.0
    assert nu(0b111) == pytest.approx(1.0)


def test_mobius_sign_follows_inversion():
    nu = SetFunction.from_mapping(SP3, {0b001: 0.2, 0b010: 0.3, 0b011: 0.4, 0b111: 1.0, 0b101: 0.2, 0b110: 0.3, 0b100: 0})
    m = mobius_transform(nu)
    assert m(0b011) == pytest.approx(0.4 - 0.2 - 0.3)


def test_capacity_checks():
    assert SetFunction.min_capacity(SP3).is_capacity()
    assert SetFunction.max_capacity(SP3).is_capacity()
    bumpy = SetFunction.from_mapping(SP3, {1: 0.5, 3: 0.2, 7: 1.0})
    assert not bumpy.is_monotone()
    assert not SetFunction.from_mapping(SP3, {7: 0.9}).is_normalized()


def test_dual_of_min_is_max():
    assert dual_capacity(SetFunction.min_capacity(SP3)).allclose(SetFunction.max_capacity(SP3))


def test_modularity_classes():
    assert classify_modularity(SetFunction.additive(SP3, [0.2, 0.3, 0.5])) == "modular"
    assert classify_modularity(SetFunction.min_capacity(SP3)) == "supermodular"
    assert classify_modularity(SetFunction.max_capacity(SP3)) == "submodular"
    odd = zeta_transform(MobiusVector.from_mapping(SP3, {1: 0.5, 6: -0.2, 3: 0.3, 7: 0.4}))
    assert classify_modularity(odd) == "neither"


def test_choquet_rejects_non_capacity():
    with pytest.raises(ValidationError):
        choquet_integral(SetFunction.from_mapping(SP3, {1: 2.0, 7: 1.0}), [1, 2, 3])


def test_choquet_of_constant_is_constant():
    nu = SetFunction.max_capacity(SP3)
    assert choquet_integral(nu, [4, 4, 4]) == pytest.approx(4)


def test_choquet_additive_is_expectation():
    nu = SetFunction.additive(SP3, [0.2, 0.6, 0.2])
    assert choquet_integral(nu, [70, 70, 10]) == pytest.approx(58)


def test_subset_minima():
    mins = subset_minima([3.0, 1.0, 2.0])
    assert mins[0] == np.inf
    assert mins[0b101] == 2.0
    assert mins[0b111] == 1.0


@st.composite
def mobius_vectors(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    mass = draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1 << n, max_size=1 << n))
    return MobiusVector(space(n), mass)


@given(mobius_vectors())
def test_round_trip_property(m):
    back = mobius_transform(zeta_transform(m))
    assert np.max(np.abs(back.mass - m.mass)) < 1e-9


@given(mobius_vectors(max_n=4))
def test_zeta_matches_brute_sum(m):
    n = m.space.n
    nu = zeta_transform(m)
    for e in range(1 << n):
        ref = sum(m.mass[a] for a in range(1 << n) if a & ~e == 0)
        assert nu(e) == pytest.approx(ref, abs=1e-9)


@st.composite
def capacities(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    mass = draw(st.lists(st.floats(0, 1), min_size=(1 << n) - 1, max_size=(1 << n) - 1))
    total = sum(mass)
    if total == 0:
        mass = [0.0] * ((1 << n) - 2) + [1.0]
        total = 1.0
    return zeta_transform(MobiusVector(space(n), [0.0] + [x / total for x in mass]))


@given(capacities(), st.data())
def test_choquet_routes_agree_and_match_level_sets(nu, data):
    n = nu.space.n
    x = data.draw(st.lists(st.floats(0, 100), min_size=n, max_size=n))
    a, b = choquet_sorted(nu, x), choquet_mobius(mobius_transform(nu), x)
    assert a == pytest.approx(b, abs=1e-9)
    ref = oracles.choquet({frozenset(i for i in range(n) if e >> i & 1): nu(e) for e in range(1 << n)}, x)
    assert a == pytest.approx(ref, abs=1e-9)


@given(capacities())
def test_belief_functions_are_supermodular_and_duals_submodular(nu):
    assert classify_modularity(nu) in ("supermodular", "modular")
    assert classify_modularity(dual_capacity(nu)) in ("submodular", "modular")
    assert dual_capacity(dual_capacity(nu)).allclose(nu, 1e-12)


@given(capacities(), st.data())
def test_choquet_is_monotone_and_translation_covariant(nu, data):
    n = nu.space.n
    x = np.array(data.draw(st.lists(st.floats(0, 50), min_size=n, max_size=n)))
    bump = np.array(data.draw(st.lists(st.floats(0, 10), min_size=n, max_size=n)))
    assert choquet_sorted(nu, x + bump) >= choquet_sorted(nu, x) - 1e-9
    assert choquet_sorted(nu, x + 3.0) == pytest.approx(choquet_sorted(nu, x) + 3.0, abs=1e-9)
