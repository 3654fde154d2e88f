"""Engine invariants checked on seeded random instances."""

from hypothesis import given, settings
from hypothesis import strategies as st

from semtransfer.engine import METARULE_COPY, RULE_APPLIED, format_trace, run_transfer, transfer
from semtransfer.syntax import format_vit
from semtransfer.terms import FreshNames, substitute

from support import base_from_text, random_case, vit

seeds = st.integers(min_value=0, max_value=10**6)


def check_exactly_once(v, result):
    consumed = [c for e in result.trace if e.kind == RULE_APPLIED for c in e.consumed]
    copied = [e.produced[0] for e in result.trace if e.kind == METARULE_COPY]
    assert sorted(consumed + copied) == sorted(v.conds)


def check_coindexation(result):
    # every target variable bound by matching reappears as that very constant
    for app in result.applications:
        produced = {t for c in substitute(app.rule.tl, app.subst, FreshNames()) for t in c.terms()}
        for c in app.rule.tl:
            for t in c.terms():
                if t.kind == "var" and t.name in app.subst:
                    assert app.subst[t.name] in produced
                    assert app.subst[t.name] in {x for d in result.output.conds for x in d.terms()}


def check_matches_are_literal(result):
    for app in result.applications:
        assert sorted(substitute(app.rule.sl, app.subst, FreshNames())) == sorted(app.consumed)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_consumption_exactly_once(seed):
    base, v = random_case(seed)
    check_exactly_once(v, run_transfer(v, base))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_coindexation_preserved(seed):
    base, v = random_case(seed)
    check_coindexation(run_transfer(v, base))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_source_conditions_never_consume(seed):
    base, v = random_case(seed)
    check_matches_are_literal(run_transfer(v, base))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_deterministic(seed):
    base, v = random_case(seed)
    a, b = run_transfer(v, base), run_transfer(v, base)
    assert format_vit(a.output) == format_vit(b.output)
    assert format_trace(a.trace) == format_trace(b.trace)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_metarule_degenerate_identity(seed):
    _, v = random_case(seed)
    assert transfer(v, base_from_text("")).conds == v.conds


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_index_bypass_agrees(seed):
    base, v = random_case(seed)
    assert transfer(v, base) == transfer(v, base, use_index=False)


def test_specificity_dominance():
    # A consumes a superset of what B would; B must never touch A's conditions
    base = base_from_text("[L:passen(E)] <-> [L:suit(E)].\n"
                          "[L:passen(E),L:arg3(E,Y),L1:bei(E,X)] <-> [L:suit(E),L:arg2(E,X),L:arg3(E,Y)].")
    result = run_transfer(vit("l3:passen(i1), l3:arg3(i1,i2), l5:bei(i1,i3)"), base)
    assert [len(a.rule.sl) for a in result.applications] == [3]


def test_dominance_with_conditions_on_both():
    base = base_from_text("[L:a(X)], [L2:k(X)] -> [L:b(X)].\n[L:a(X), L1:c(X)], [L2:k(X)] -> [L:d(X)].")
    result = run_transfer(vit("l1:a(i1), l1:c(i1), l2:k(i1)"), base)
    assert [a.rule.provenance.line for a in result.applications] == [2]
