import pytest
from hypothesis import given, strategies as st

from oracles import minimal_antichain
from sneng.beliefs import BeliefError, BeliefStore, Context, DER, HYP
from sneng.terms import TermStore


def fresh():
    store = TermStore()
    return store, BeliefStore(store), Context("default")


def test_hypothesis_record_is_singleton_origin():
    store, beliefs, ctx = fresh()
    p = store.intern("fun", [store.atom("learning")])
    status = beliefs.add_hyp(p, ctx)
    assert status.asserted
    assert [(r.tag, set(r.origin_set)) for r in status.supports] == [(HYP, {p})]


def test_asserting_twice_is_a_noop():
    store, beliefs, ctx = fresh()
    p = store.atom("p")
    beliefs.add_hyp(p, ctx)
    before = beliefs.records(p)
    beliefs.add_hyp(p, ctx)
    assert beliefs.records(p) == before


def test_open_formula_cannot_be_hypothesis():
    store, beliefs, ctx = fresh()
    open_p = store.intern("fun", [store.variable("x")])
    with pytest.raises(BeliefError):
        beliefs.add_hyp(open_p, ctx)


def test_derived_support_is_recorded():
    store, beliefs, ctx = fresh()
    a, r, c = store.atom("a"), store.atom("r"), store.atom("c")
    beliefs.add_hyp(a, ctx)
    beliefs.add_hyp(r, ctx)
    beliefs.add_derived(c, {a, r})
    status = beliefs.status(c, ctx)
    assert [(rec.tag, set(rec.origin_set)) for rec in status.supports] == [(DER, {a, r})]


def test_subset_forces_superset_discard():
    store, beliefs, ctx = fresh()
    a, r, c = store.atom("a"), store.atom("r"), store.atom("c")
    beliefs.add_derived(c, {a, r})
    assert beliefs.add_derived(c, {a})
    assert [set(rec.origin_set) for rec in beliefs.records(c)] == [{a}]


def test_incomparable_sets_are_both_kept():
    store, beliefs, ctx = fresh()
    a, b, r, c = (store.atom(n) for n in "abrc")
    beliefs.add_derived(c, {a, r})
    beliefs.add_derived(c, {b, r})
    assert {frozenset(rec.origin_set) for rec in beliefs.records(c)} == \
        {frozenset({a, r}), frozenset({b, r})}


def test_is_asserted_requires_origin_within_context():
    store, beliefs, ctx = fresh()
    h1, h2, c = store.atom("h1"), store.atom("h2"), store.atom("c")
    beliefs.add_hyp(h1, ctx)
    beliefs.add_derived(c, {h1, h2})
    assert not beliefs.is_asserted(c, ctx)
    beliefs.add_hyp(h2, ctx)
    assert beliefs.is_asserted(c, ctx)


def test_retract_drops_solely_supported_beliefs():
    store, beliefs, ctx = fresh()
    h, c = store.atom("h"), store.atom("c")
    beliefs.add_hyp(h, ctx)
    beliefs.add_derived(c, {h})
    report = beliefs.retract(h, ctx)
    assert report.removed == h
    assert set(report.dropped) == {h, c}
    assert not beliefs.is_asserted(c, ctx)


def test_redundant_support_survives_retraction():
    store, beliefs, ctx = fresh()
    h1, h2, c = store.atom("h1"), store.atom("h2"), store.atom("c")
    beliefs.add_hyp(h1, ctx)
    beliefs.add_hyp(h2, ctx)
    beliefs.add_derived(c, {h1})
    beliefs.add_derived(c, {h2})
    report = beliefs.retract(h1, ctx)
    assert set(report.dropped) == {h1}
    assert beliefs.is_asserted(c, ctx)


def test_reasserting_restores_derived_beliefs_without_reinference():
    store, beliefs, ctx = fresh()
    h, c = store.atom("h"), store.atom("c")
    beliefs.add_hyp(h, ctx)
    beliefs.add_derived(c, {h})
    beliefs.retract(h, ctx)
    assert not beliefs.is_asserted(c, ctx)
    beliefs.add_hyp(h, ctx)  # supports were retained
    assert beliefs.is_asserted(c, ctx)


def test_retracting_a_non_hypothesis_is_an_error():
    store, beliefs, ctx = fresh()
    with pytest.raises(BeliefError):
        beliefs.retract(store.atom("h"), ctx)


# -- properties -------------------------------------------------------------

@given(st.lists(st.frozensets(st.integers(min_value=0, max_value=5),
                              min_size=1, max_size=4), min_size=1, max_size=20))
def test_stored_sets_equal_minimal_antichain_oracle(origin_sets):
    store, beliefs, ctx = fresh()
    hyps = [store.atom(f"h{i}") for i in range(6)]
    c = store.atom("c")
    translated = []
    for oset in origin_sets:
        t = frozenset(hyps[i] for i in oset)
        translated.append(t)
        beliefs.add_derived(c, t)
    stored = {frozenset(rec.origin_set) for rec in beliefs.records(c)}
    assert stored == minimal_antichain(translated)
    assert beliefs.check_minimality()


@given(st.lists(st.frozensets(st.integers(min_value=0, max_value=5),
                              min_size=1, max_size=4), min_size=1, max_size=12),
       st.lists(st.integers(min_value=0, max_value=5), max_size=6))
def test_adding_hypotheses_never_unasserts(origin_sets, hyp_order):
    store, beliefs, ctx = fresh()
    hyps = [store.atom(f"h{i}") for i in range(6)]
    c = store.atom("c")
    for oset in origin_sets:
        beliefs.add_derived(c, frozenset(hyps[i] for i in oset))
    asserted_history = []
    for i in hyp_order:
        beliefs.add_hyp(hyps[i], ctx)
        asserted_history.append(beliefs.is_asserted(c, ctx))
    # monotone: once true, stays true
    assert asserted_history == sorted(asserted_history)
