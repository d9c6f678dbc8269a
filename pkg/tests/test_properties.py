"""Cross-module invariants as property tests over seeded random models."""

import random

from hypothesis import given, settings, strategies as st

import oracles as O
from vpconf.balanced import check_ioco
from vpconf.closures import (check_deterministic, complement, make_non_blocking, product,
                             remove_epsilon_deterministic, union)
from vpconf.core import Vpa, enumerate_language, initial_configurations, traces
from vpconf.iovpts import after, out
from vpconf.vpts import contract, induced_vpa, induced_vpts, vpts_determinism

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=50, deadline=None)


def all_final(m):
    return Vpa(m.states, m.initial, m.alphabet, m.stack_symbols, m.transitions, m.states)


@SETTINGS
@given(seeds)
def test_observable_traces_are_erased_traces(seed):
    rng = random.Random(seed)
    v = O.random_vpts(rng, n_states=rng.randint(1, 3), internal=0.5)
    n = 2
    # internal detours between two visible letters never need more than |S| - 1 moves
    big = n + (n + 1) * (len(v.states) - 1)
    erased = {O.h_tau(w) for w in traces(v, big, observable=False)}
    assert {w for w in erased if len(w) <= n} == traces(v, n)


@SETTINGS
@given(seeds)
def test_vpts_traces_equal_induced_language(seed):
    rng = random.Random(seed)
    v = O.random_vpts(rng, n_states=rng.randint(1, 5))
    assert enumerate_language(induced_vpa(v), 5) == O.trace_set(v, 5)


@SETTINGS
@given(seeds)
def test_constructions_preserve_determinism(seed):
    rng = random.Random(seed)
    alphabet = O.random_alphabet(rng)
    a = O.random_vpa(rng, alphabet, deterministic=True, eps=0)
    b = O.random_vpa(rng, alphabet, deterministic=True, eps=0)
    for m in (product(a, b), make_non_blocking(a), union(a, b), complement(a),
              remove_epsilon_deterministic(O.random_vpa(rng, alphabet, deterministic=True))):
        assert check_deterministic(m).deterministic


@SETTINGS
@given(seeds)
def test_product_stack_heights_match_components(seed):
    rng = random.Random(seed)
    alphabet = O.random_alphabet(rng)
    a = O.random_vpa(rng, alphabet, eps=0)
    b = O.random_vpa(rng, alphabet, eps=0)
    p = product(a, b)
    for w, _, st_ in O.runs(p, 4):
        heights_a = {len(s) for ww, _, s in O.runs(a, len(w)) if ww == w}
        assert len(st_) in heights_a


@SETTINGS
@given(seeds)
def test_contract_is_idempotent(seed):
    rng = random.Random(seed)
    v = O.random_vpts(rng, n_states=rng.randint(1, 6))
    once = contract(v, warn=False).result
    twice = contract(once, warn=False)
    assert twice.result.transitions == once.transitions and twice.result.states == once.states
    assert not twice.removed_transitions and not twice.removed_states
    disjoint = contract(v, warn=False)
    assert not (disjoint.removed_transitions & disjoint.result.transitions)
    assert not (disjoint.removed_states & disjoint.result.states)


@SETTINGS
@given(seeds)
def test_contract_preserves_bounded_determinism(seed):
    rng = random.Random(seed)
    v = O.random_vpts(rng, n_states=rng.randint(1, 5))
    assert vpts_determinism(contract(v, warn=False).result, 5).deterministic == vpts_determinism(v, 5).deterministic


@SETTINGS
@given(seeds)
def test_ioco_agrees_with_after_out_oracle(seed):
    rng = random.Random(seed)
    alphabet = O.random_alphabet(rng, io=True)
    s = O.random_vpa(rng, alphabet, n_states=rng.randint(1, 4), deterministic=True, eps=0)
    spec = induced_vpts(all_final(s))
    impl = O.random_vpts(rng, alphabet, n_states=rng.randint(1, 4), internal=0)
    v = check_ioco(spec, impl)
    si, ii = initial_configurations(spec), initial_configurations(impl)
    violated = any(not out(impl, after(impl, ii, w)) <= out(spec, after(spec, si, w))
                   for w in traces(spec, 4))
    if violated:
        assert not v.conforms
    if v.conforms:
        assert not violated
