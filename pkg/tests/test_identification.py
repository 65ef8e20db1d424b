import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from verifiability import (
    Act,
    EventFamily,
    NotVerificationCapacity,
    Scenario,
    SetFunction,
    StateSpace,
    UtilitySpec,
    close_under_union,
    critical_family,
    dual_capacity,
    identify,
    induced_capacity,
    is_max_increasing,
    is_min_increasing,
    model_values,
    recover_structure,
    same_preferences,
    verification_capacity,
    within_model_class,
)
from verifiability.identification import positively_affine, rebuild_scenario
from verifiability.setfunc import mobius_transform

from corpus import random_scenario

SP = StateSpace(("s", "t", "u"))
ST, S, T, U, FULL = 0b011, 0b001, 0b010, 0b100, 0b111
B = [0.2, 0.6, 0.2]


def ccr_nu(family=(ST, FULL), beliefs=B):
    return verification_capacity(SP, family, beliefs)


def test_induced_capacity_of_ccr():
    nu = ccr_nu()
    assert nu(ST) == pytest.approx(0.8)
    assert nu(FULL) == pytest.approx(1.0)
    assert all(nu(e) == 0 for e in range(7) if e != ST)


def test_induced_capacity_full_verifiability_is_additive():
    nu = verification_capacity(SP, range(1, 8), B)
    assert nu.allclose(SetFunction.additive(SP, B))


def test_obfuscation_capacity_is_the_dual():
    acts = (Act.constant(0, 3),)
    sc = Scenario(SP, acts, UtilitySpec(), B, EventFamily([ST, U, FULL]), "obfuscation")
    nu = induced_capacity(sc)
    assert nu(U) == pytest.approx(0.2)
    assert nu(S) == pytest.approx(0.8)
    assert dual_capacity(nu).allclose(induced_capacity(sc, "verification"))


def test_recover_ccr():
    res = recover_structure(ccr_nu())
    assert res.verifiable_core == EventFamily([ST, FULL])
    assert res.phi == (ST, ST, FULL)
    assert list(res.eta) == pytest.approx([0.4, 0.4, 0.2])
    assert res.irrelevant_states == 0
    assert res.union_closure == close_under_union(res.verifiable_core)


def test_recover_additive():
    res = recover_structure(SetFunction.additive(SP, B))
    assert res.verifiable_core == EventFamily([S, T, U])
    assert res.phi == (S, T, U)
    assert list(res.eta) == pytest.approx(B)


def test_max_capacity_is_rejected():
    two = StateSpace(("s", "t"))
    with pytest.raises(NotVerificationCapacity, match="not a verification capacity"):
        recover_structure(SetFunction.max_capacity(two))
    assert not within_model_class(SetFunction.max_capacity(two))


def test_non_capacity_is_rejected():
    with pytest.raises(NotVerificationCapacity):
        recover_structure(SetFunction.from_mapping(SP, {S: 0.5, ST: 0.2, FULL: 1.0}))


def test_irrelevant_states_are_reported():
    nu = verification_capacity(SP, [ST, FULL], [0.5, 0.5, 0.0])
    res = recover_structure(nu)
    assert res.irrelevant_states == U
    assert res.phi[2] is None
    assert list(res.eta) == pytest.approx([0.5, 0.5, 0])


def test_zero_belief_state_with_two_minimal_events():
    # t has no belief and sits in two incomparable core events
    nu = verification_capacity(SP, [ST, 0b110, T, FULL], [0.5, 0.0, 0.5])
    res = recover_structure(nu)
    assert res.eta[1] == 0
    assert within_model_class(nu)


def test_min_increasing_examples():
    nu = ccr_nu()
    assert is_min_increasing(nu, ST)
    assert is_min_increasing(nu, FULL)
    assert not is_min_increasing(nu, S)
    assert not is_min_increasing(nu, 0)


def test_max_increasing_examples():
    acts = (Act.constant(0, 3),)
    obf = Scenario(SP, acts, UtilitySpec(), B, EventFamily([ST, FULL]), "obfuscation")
    nu = induced_capacity(obf)
    assert is_max_increasing(dual_capacity(nu), ST)
    assert not is_max_increasing(nu, FULL)
    additive = SetFunction.additive(SP, B)
    assert all(is_max_increasing(additive, e) for e in range(7))


def test_critical_families():
    assert critical_family(ccr_nu()) == EventFamily([ST, FULL])
    additive = SetFunction.additive(SP, [0.5, 0.5, 0.0])
    assert critical_family(additive) == EventFamily([S, T, ST])
    two = StateSpace(("s", "t"))
    assert critical_family(SetFunction.min_capacity(two)) == EventFamily([0b11])


def test_same_preferences_examples():
    res = recover_structure(ccr_nu())
    assert same_preferences((res, B), (res, res.eta))
    assert same_preferences((res, B), (res, B))
    other = recover_structure(ccr_nu((S, ST, FULL)))
    assert not same_preferences((res, B), (other, B))


def test_positively_affine():
    x = np.linspace(0, 100, 11)
    assert positively_affine(x, 2 * x + 3)
    assert not positively_affine(x, -x)
    assert not positively_affine(x, np.sqrt(x))


def _scenario(seed, model="verification"):
    return random_scenario(np.random.default_rng(seed), model)


seeds = st.integers(0, 2**32 - 1)


def _minimal_event(family, s):
    out = None
    for e in family:
        if e >> s & 1:
            out = e if out is None else out & e
    return out


@settings(max_examples=80)
@given(seeds)
def test_mobius_mass_is_belief_of_preimage(seed):
    sc = _scenario(seed)
    m = mobius_transform(induced_capacity(sc)).mass
    expect = np.zeros_like(m)
    for s in range(sc.space.n):
        expect[_minimal_event(sc.verifiable, s)] += sc.beliefs[s]
    assert np.allclose(m, expect, atol=1e-12)


@settings(max_examples=80)
@given(seeds, st.sampled_from(["verification", "obfuscation"]))
def test_identification_round_trip(seed, model):
    sc = _scenario(seed, model)
    res = identify(sc)
    rebuilt = rebuild_scenario(res, sc)
    assert np.allclose(model_values(rebuilt), model_values(sc), atol=1e-9)
    phis = {_minimal_event(sc.verifiable, s) for s in range(sc.space.n) if sc.beliefs[s] > 0}
    assert res.union_closure == close_under_union(EventFamily(phis))
    assert sum(res.eta) == pytest.approx(1.0)
    for s, e in enumerate(res.phi):
        assert e in res.verifiable_core and e >> s & 1


@settings(max_examples=80)
@given(seeds)
def test_min_critical_family_is_union_closure_of_core(seed):
    nu = induced_capacity(_scenario(seed))
    res = recover_structure(nu)
    assert critical_family(nu) == res.union_closure
    for e in range(1 << nu.space.n):
        assert is_min_increasing(nu, e) == (e in res.union_closure)


@settings(max_examples=60)
@given(seeds)
def test_max_critical_family_is_union_closed_for_obfuscation(seed):
    sc = _scenario(seed, "obfuscation")
    nu = induced_capacity(sc)
    fam = critical_family(nu, "max")
    for e in range(1 << sc.space.n):
        assert is_max_increasing(nu, e) == (e in fam)
    n = sc.space.n
    flipped = EventFamily((1 << n) - 1 & ~e for e in fam)
    assert flipped == critical_family(dual_capacity(nu), "min")
    assert close_under_union(flipped) == flipped
