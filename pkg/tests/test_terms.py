import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semtransfer.errors import VitFormatError
from semtransfer.syntax import format_vit, parse_rule_file, parse_vit
from semtransfer.terms import (CONST, VAR, FreshNames, LabeledCondition, Term, Vit, cond, match_set, match_term,
                               namespace, skolemize, substitute, term, vit_alpha_equal)

from support import load_vit


def pat(text):
    """Parse a bracketed pattern list through the rule reader."""
    rules, _ = parse_rule_file(f"{text} -> [].")
    return list(rules[0].sl)


def const(name):
    return Term(CONST, name)


class TestTerms:
    def test_lexical_classes(self):
        assert term("L").kind == VAR
        assert term("_x").kind == VAR
        assert term("l12").kind == CONST
        assert term("j3").kind == CONST
        assert term("temp_point").kind == "atom"

    def test_namespaces(self):
        assert namespace("l1") == namespace("t4") == "label"
        assert namespace("i1") == namespace("j2") == "instance"
        assert namespace("time") is None

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            term("3x")

    def test_str_marks_class_flag(self):
        assert str(cond("t1", "temp_loc", "i1", "i2", class_flag=True)) == "t1:#temp_loc(i1,i2)"

    def test_zero_arity(self):
        assert str(cond("l1", "rain")) == "l1:rain"


class TestMatchTerm:
    def test_binds_label_and_argument(self):
        s = match_term(pat("[L:echt(A)]")[0], cond("l1", "echt", "l2"), {})
        assert s == {"L": const("l1"), "A": const("l2")}

    def test_constant_positions_must_be_equal(self):
        (p,) = pat("[l1:echt(X)]")
        assert match_term(p, cond("l1", "echt", "l2"), {}) == {"X": const("l2")}
        assert match_term(p, cond("l3", "echt", "l2"), {}) is None

    def test_predicate_mismatch(self):
        assert match_term(pat("[L:suit(E)]")[0], cond("l3", "passen", "i1"), {}) is None

    def test_respects_existing_binding(self):
        (p,) = pat("[L:passen(E)]")
        assert match_term(p, cond("l3", "passen", "i1"), {"E": const("i2")}) is None
        assert match_term(p, cond("l3", "passen", "i1"), {"E": const("i1")}) is not None

    def test_does_not_mutate_input_substitution(self):
        s = {"E": const("i1")}
        match_term(pat("[L:passen(E)]")[0], cond("l3", "passen", "i1"), s)
        assert s == {"E": const("i1")}

    def test_class_flag_must_agree(self):
        (p,) = pat("[L:temp_loc(E,X)]")
        assert match_term(p, cond("t1", "temp_loc", "i1", "i2", class_flag=True), {}) is None


def brute_force_matches(patterns, ground):
    """Independent enumeration: every injective assignment, checked literally."""
    out = []
    for perm in itertools.permutations(ground, len(patterns)):
        s = {}
        ok = True
        for p, g in zip(patterns, perm):
            if (p.predicate, len(p.args)) != (g.predicate, len(g.args)):
                ok = False
                break
            for x, y in zip(p.terms(), g.terms()):
                if x.kind == VAR:
                    if s.setdefault(x.name, y) != y:
                        ok = False
                elif x != y:
                    ok = False
        if ok:
            out.append((s, set(perm)))
    return out


class TestMatchSet:
    def test_bei_rule_against_example_input(self):
        patterns = pat("[L:passen(E),L:arg3(E,Y),L1:bei(E,X)]")
        ground = load_vit("bei.vit").conds
        sols = list(match_set(patterns, ground))
        assert len(sols) == 1 == len(brute_force_matches(patterns, ground))
        s, consumed = sols[0]
        assert {k: v.name for k, v in s.items()} == {"L": "l3", "E": "i1", "Y": "i2", "L1": "l5", "X": "i3"}
        assert {str(c) for c in consumed} == {"l3:passen(i1)", "l3:arg3(i1,i2)", "l5:bei(i1,i3)"}

    def test_empty_patterns_give_one_empty_solution(self):
        assert list(match_set([], load_vit("bei.vit").conds)) == [({}, ())]

    def test_absent_predicate_gives_no_solution(self):
        assert list(match_set(pat("[L:pron(X)]"), [cond("l1", "echt", "l2")])) == []

    def test_injective(self):
        # two patterns cannot both consume the single a-condition
        assert list(match_set(pat("[L:a(X), L2:a(Y)]"), [cond("l1", "a", "i1")])) == []

    def test_agrees_with_brute_force_on_ambiguous_input(self):
        patterns = pat("[L:a(X), L:b(X,Y)]")
        ground = [cond("l1", "a", "i1"), cond("l1", "a", "i2"), cond("l1", "b", "i1", "i2"),
                  cond("l1", "b", "i2", "i2"), cond("l2", "b", "i1", "i1")]
        ours = [(dict(s), set(c)) for s, c in match_set(patterns, ground)]
        theirs = brute_force_matches(patterns, ground)
        assert sorted(map(repr, ours)) == sorted(map(repr, theirs))
        assert len(ours) == 2


class TestSubstitute:
    def test_unbound_label_variable_gets_fresh_label(self):
        out = substitute(pat("[L:neg(A), A:good(E)]"), {"L": const("l2"), "E": const("i1")}, FreshNames())
        assert [str(c) for c in out] == ["t1:good(i1)", "l2:neg(t1)"]

    def test_fully_bound(self):
        out = substitute(pat("[L:real(A)]"), {"L": const("l1"), "A": const("l2")}, FreshNames())
        assert [str(c) for c in out] == ["l1:real(l2)"]

    def test_empty(self):
        assert substitute([], {"L": const("l1")}, FreshNames()) == ()

    def test_unbound_argument_gets_instance_namespace(self):
        (c,) = substitute(pat("[L:p(X)]"), {"L": const("l1")}, FreshNames())
        assert c.args[0].name == "j1"

    def test_fresh_names_avoid_taken(self):
        fresh = FreshNames(taken={"t1", "t2"})
        assert fresh.label().name == "t3"

    def test_same_variable_same_constant(self):
        out = substitute(pat("[L:p(X), L:q(X)]"), {}, FreshNames())
        assert out[0].args == out[1].args and out[0].label == out[1].label


class TestSkolemize:
    def test_single(self):
        assert [str(c) for c in skolemize(pat("[L:pron(X)]"))] == ["l1:pron(i1)"]

    def test_ground_is_identity(self):
        conds = load_vit("bei.vit").conds
        assert skolemize(conds) == conds

    def test_shared_variables_share_constants(self):
        out = skolemize(pat("[L:p(X), L:q(X)]"))
        # brute force: the only renaming-invariant facts are equalities among positions
        assert out[0].label == out[1].label and out[0].args == out[1].args
        assert out[0].label.name.startswith("l") and out[0].args[0].name.startswith("i")

    def test_variable_in_label_and_argument_takes_label_namespace(self):
        out = skolemize(pat("[L:support(S,L1), L1:lieb(Y)]"))
        lieb = next(c for c in out if c.predicate == "lieb")
        support = next(c for c in out if c.predicate == "support")
        assert support.args[1] == lieb.label and namespace(lieb.label.name) == "label"


def brute_alpha_equal(a, b):
    """Reference: try every namespace-respecting bijection of constants."""
    ca = sorted({t.name for c in a for t in c.terms()})
    cb = sorted({t.name for c in b for t in c.terms()})
    if len(ca) != len(cb):
        return False
    target = {str(c) for c in b}
    for perm in itertools.permutations(cb):
        m = dict(zip(ca, perm))
        if any(namespace(x) != namespace(y) for x, y in m.items()):
            continue
        image = {str(LabeledCondition(term(m[c.label.name]), c.predicate,
                                      tuple(term(m[x.name]) for x in c.args))) for c in a}
        if image == target:
            return True
    return False


class TestAlphaEquivalence:
    def test_fresh_name_irrelevant(self):
        a = Vit("en", (cond("l2", "neg", "l7"), cond("l7", "good", "i1")))
        b = Vit("en", (cond("l2", "neg", "t1"), cond("t1", "good", "i1")))
        assert vit_alpha_equal(a, b)
        assert brute_alpha_equal(a.conds, b.conds)

    def test_reflexive(self):
        v = load_vit("bei.vit")
        assert vit_alpha_equal(v, v)

    def test_cannot_merge_labels(self):
        a = Vit("en", (cond("l1", "p", "i1"), cond("l2", "q", "i1")))
        b = Vit("en", (cond("l1", "p", "i1"), cond("l1", "q", "i1")))
        assert not vit_alpha_equal(a, b)
        assert not brute_alpha_equal(a.conds, b.conds)

    def test_namespaces_respected(self):
        a = Vit("en", (cond("l1", "p", "i1"),))
        b = Vit("en", (cond("l1", "p", "l2"),))
        assert not vit_alpha_equal(a, b)

    def test_language_must_agree(self):
        assert not vit_alpha_equal(Vit("en", ()), Vit("de", ()))

    def test_sorts_follow_renaming(self):
        a = Vit("en", (cond("l1", "p", "i1"), cond("l1", "q", "i2")), {"i1": "time"})
        b = Vit("en", (cond("l1", "p", "i2"), cond("l1", "q", "i1")), {"i2": "time"})
        c = Vit("en", (cond("l1", "p", "i2"), cond("l1", "q", "i1")), {"i1": "time"})
        assert vit_alpha_equal(a, b)
        assert not vit_alpha_equal(a, c)


class TestVit:
    def test_canonical_order_and_dedup(self):
        v = Vit("de", (cond("l2", "b", "i1"), cond("l1", "a", "i1"), cond("l1", "a", "i1")))
        assert [str(c) for c in v.conds] == ["l1:a(i1)", "l2:b(i1)"]

    def test_rejects_variables(self):
        with pytest.raises(VitFormatError):
            Vit("de", (LabeledCondition(term("L"), "a", ()),))

    def test_rejects_orphan_sort(self):
        with pytest.raises(VitFormatError):
            Vit("de", (cond("l1", "a", "i1"),), {"i9": "time"})


# -- properties -----------------------------------------------------------------------

PREDS = {"a": 1, "b": 2, "c": 0}

ground_conds = st.lists(
    st.sampled_from(sorted(PREDS)).flatmap(lambda p: st.tuples(
        st.just(p), st.sampled_from(["l1", "l2", "l3"]),
        st.lists(st.sampled_from(["i1", "i2", "i3"]), min_size=PREDS[p], max_size=PREDS[p]))),
    max_size=7,
).map(lambda items: [cond(lab, p, *args) for p, lab, args in items])

patterns = st.lists(
    st.sampled_from(sorted(PREDS)).flatmap(lambda p: st.tuples(
        st.just(p), st.sampled_from(["L", "L1", "l1"]),
        st.lists(st.sampled_from(["X", "Y", "i1"]), min_size=PREDS[p], max_size=PREDS[p]))),
    max_size=3,
).map(lambda items: [LabeledCondition(term(lab), p, tuple(term(a) for a in args)) for p, lab, args in items])


@settings(max_examples=200, deadline=None)
@given(patterns, ground_conds)
def test_match_soundness_and_round_trip(ps, gs):
    for s, consumed in match_set(ps, gs):
        assert all(v.kind == CONST for v in s.values())
        # every pattern variable is bound, so substitution reproduces the consumed set exactly
        assert sorted(substitute(ps, s, FreshNames())) == sorted(set(consumed))
        assert len(set(consumed)) == len(ps)


@settings(max_examples=200, deadline=None)
@given(patterns, ground_conds)
def test_match_set_complete(ps, gs):
    gs = list(dict.fromkeys(gs))
    ours = {tuple(sorted(map(str, c))) for _, c in match_set(ps, gs)}
    theirs = {tuple(sorted(map(str, c))) for _, c in brute_force_matches(ps, gs)}
    assert ours == theirs


@settings(max_examples=150, deadline=None)
@given(ground_conds, st.permutations(["l1", "l2", "l3", "t1"]), st.permutations(["i1", "i2", "i3", "j1"]))
def test_alpha_equivalence_invariant_under_renaming(gs, labels, insts):
    m = dict(zip(["l1", "l2", "l3", "t1"], labels)) | dict(zip(["i1", "i2", "i3", "j1"], insts))
    renamed = [LabeledCondition(term(m[c.label.name]), c.predicate, tuple(term(m[a.name]) for a in c.args))
               for c in gs]
    a, b = Vit("en", tuple(gs)), Vit("en", tuple(renamed))
    assert vit_alpha_equal(a, b) and vit_alpha_equal(b, a)


@settings(max_examples=150, deadline=None)
@given(ground_conds, ground_conds)
def test_alpha_equivalence_agrees_with_brute_force(a, b):
    assert vit_alpha_equal(Vit("en", tuple(a)), Vit("en", tuple(b))) == brute_alpha_equal(set(a), set(b))


@settings(max_examples=150, deadline=None)
@given(ground_conds)
def test_vit_serialization_round_trip(gs):
    v = Vit("de", tuple(gs))
    text = format_vit(v)
    again = parse_vit(text)
    assert again == v and format_vit(again) == text
