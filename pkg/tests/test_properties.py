from hypothesis import given, settings
from hypothesis import strategies as st

from agiwelfare.conditions import check_condition_iv, diagnose
from agiwelfare.delegation import delegation_loss_and_bound
from agiwelfare.externality import detect_autonomy_externalities, pigouvian_tau
from agiwelfare.io import emit_economy, parse_economy
from agiwelfare.pareto import autonomy_pareto_check, classical_pareto_check
from agiwelfare.scenarios import (
    ABLATIONS,
    generate_channel_instance,
    generate_classical_instance,
    generate_delegation_instance,
    generate_random_economy,
    generate_tiny_instance,
)
from naive_oracle import naive_pareto

seeds = st.integers(min_value=0, max_value=10**6)
fast = settings(max_examples=40, deadline=None)


@fast
@given(seeds)
def test_production_oracle_matches_naive(seed):
    e, fs = generate_tiny_instance(seed)
    assert autonomy_pareto_check(e, fs).efficient == naive_pareto(e, fs)[0]


@fast
@given(seeds)
def test_improver_is_a_genuine_improvement(seed):
    e, fs = generate_tiny_instance(seed)
    v = autonomy_pareto_check(e, fs)
    if not v.efficient:
        assert all(a >= b - 1e-9 for b, a in v.welfare_table.values())
        assert v.welfare_table[v.improved_entity][1] > v.welfare_table[v.improved_entity][0]


@fast
@given(seeds, st.booleans())
def test_round_trip_random_economies(seed, exact):
    e, cand = generate_random_economy(seed)
    text = emit_economy(e, cand)
    p = parse_economy(text, exact=exact)
    assert emit_economy(p.economy, p.candidate) == text
    if not exact:
        assert p.economy == e and p.candidate == cand
    assert diagnose(p.economy, p.candidate).first_fail == diagnose(e, cand).first_fail


@fast
@given(seeds)
def test_conforming_economies_are_sound(seed):
    e, cand = generate_random_economy(seed)
    assert diagnose(e, cand).all_pass
    assert autonomy_pareto_check(e, cand.state).efficient


@fast
@given(seeds, st.sampled_from(ABLATIONS))
def test_ablation_names_its_condition(seed, cond):
    assert diagnose(*generate_random_economy(seed, ablate=cond)).failing == [cond]


@fast
@given(seeds)
def test_detector_and_condition_iv_are_conjugate(seed):
    e, cand = generate_channel_instance(seed)
    assert (detect_autonomy_externalities(e, cand) == []) == (check_condition_iv(e, cand).verdict == "pass")


@fast
@given(seeds)
def test_tau_negates_every_effect(seed):
    e, cand = generate_channel_instance(seed)
    s = cand.state.state
    for c in e.channels:
        tau = pigouvian_tau(e, c, cand)
        assert all(tau[a] == -c.effect_of(a, s) for a in c.actions)


@fast
@given(seeds)
def test_classical_and_autonomy_agree(seed):
    e, fs = generate_classical_instance(seed)
    assert classical_pareto_check(e, fs).efficient == autonomy_pareto_check(e, fs).efficient


@fast
@given(seeds)
def test_delegation_loss_never_exceeds_bound(seed):
    e, cand, d = generate_delegation_instance(seed)
    b = delegation_loss_and_bound(e, d, cand)
    assert 0 <= b.loss <= b.bound + 1e-9
    assert b.divergence_gap >= b.loss - 1e-9


@fast
@given(seeds)
def test_generation_is_deterministic(seed):
    assert generate_random_economy(seed) == generate_random_economy(seed)
