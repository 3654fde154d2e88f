import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semtransfer.errors import RuleSyntaxError, RuleValidationError, SortHierarchyError, VitFormatError
from semtransfer.syntax import (BACKWARD, BIDIRECTIONAL, EXTERNAL, FORWARD, PATTERN, SORT_LEQ, SORT_NOT_LEQ,
                                format_rule_file, format_sorts, format_vit, format_vits, parse_rule_file,
                                parse_rule_files, parse_sorts, parse_vit, parse_vits)

from support import ALL_RULE_FILES, data, load_vit, read


def one(text):
    rules, _ = parse_rule_file(text, "t.rules")
    assert len(rules) == 1
    return rules[0]


class TestRuleParsing:
    def test_simple_lexical_rule(self):
        r = one("[L:echt(A)] <-> [L:real(A)].")
        assert r.op == BIDIRECTIONAL and len(r.sl) == 1 and len(r.tl) == 1
        assert r.sl_conds == () and r.tl_conds == ()

    def test_source_condition(self):
        r = one("[L:schlecht(E)],[L1:passen(E)] <-> [L:neg(A),A:good(E)].")
        assert [c.kind for c in r.sl_conds] == [PATTERN]
        assert str(r.sl_conds[0]) == "L1:passen(E)"

    def test_empty_source_set_is_rejected(self):
        with pytest.raises(RuleValidationError, match="empty source"):
            parse_rule_file("[] -> [L:x(A)].")

    def test_sort_conditions(self):
        r = one("[L:termin(X)],\n [sort(X)=<~temp_point] <-> [L:date(X)].")
        assert [(c.kind, c.payload[1]) for c in r.sl_conds] == [(SORT_NOT_LEQ, "temp_point")]
        r = one("[temp_loc(E,X)],[sort(X)=<time] <-> [temp_loc(E,X)].")
        assert r.sl_conds[0].kind == SORT_LEQ

    def test_unlabeled_condition_gets_anonymous_label(self):
        r = one("[temp_loc(E,X)] <-> [temp_loc(E,X)].")
        assert r.sl[0].label.is_var and r.sl[0].label.is_anonymous

    def test_external_and_target_conditions(self):
        r = one("[L:a(X)],[dialog_act(X)] -> [L:b(X)],[L1:c(X), sort(X)=<time].")
        assert [c.kind for c in r.sl_conds] == [EXTERNAL]
        assert [c.kind for c in r.tl_conds] == [PATTERN, SORT_LEQ]
        assert r.op == FORWARD

    def test_backward_operator_and_deletion(self):
        r = one("[L:a(X)] <- [].")
        assert r.op == BACKWARD and r.tl == ()

    def test_zero_arity(self):
        assert str(one("[L:rain] -> [L:regnen].").sl[0]) == "L:rain"

    def test_comments_are_ignored(self):
        rules, _ = parse_rule_file("% intro\n[L:a(X)] -> [L:b(X)]. % trailing\n% end\n")
        assert len(rules) == 1

    def test_class_definition(self):
        _, classes = parse_rule_file("type(de,temp_loc,[an,in,um,zu]).")
        assert (classes[0].lang, classes[0].name, classes[0].members) == ("de", "temp_loc", ("an", "in", "um", "zu"))

    def test_duplicate_class_definition(self):
        with pytest.raises(RuleValidationError, match="duplicate class"):
            parse_rule_file("type(de,c,[a]). type(de,c,[b]).")

    def test_duplicate_class_member(self):
        with pytest.raises(RuleValidationError):
            parse_rule_file("type(de,c,[a,a]).")

    def test_arity_clash_on_one_side(self):
        with pytest.raises(RuleValidationError, match="arity"):
            parse_rule_file("[L:a(X)] <-> [].\n[L:a(X,Y)] <-> [].")

    def test_same_symbol_in_both_languages_may_differ_in_arity(self):
        assert one("[L:a(X)] <-> [L:a(X,Y)].")

    def test_syntax_error_position(self):
        with pytest.raises(RuleSyntaxError) as exc:
            parse_rule_file("[L:a(X)] <-> [L:b(X)].\n[L:a(X)] => [].", "bad.rules")
        assert (exc.value.line, exc.value.column) == (2, 11)
        assert "bad.rules:2:11" in str(exc.value)

    def test_missing_period(self):
        with pytest.raises(RuleSyntaxError):
            parse_rule_file("[L:a(X)] -> [L:b(X)]")

    def test_provenance_lines_and_ordinals(self):
        rules, _ = parse_rule_file(read("core.rules"), "core.rules")
        assert [r.provenance.line for r in rules] == [2, 3, 5, 7]
        assert [r.provenance.ordinal for r in rules] == [0, 1, 2, 3]

    def test_ordinals_global_across_files(self):
        rules, classes = parse_rule_files([data(f) for f in ALL_RULE_FILES])
        ordinals = [r.provenance.ordinal for r in rules]
        assert ordinals == sorted(ordinals) == list(range(len(rules)))
        assert len(classes) == 2


@pytest.mark.parametrize("name", ALL_RULE_FILES)
def test_every_fixture_parses_and_round_trips(name):
    rules, classes = parse_rule_file(read(name), name)
    text = format_rule_file(rules, classes)
    again, again_classes = parse_rule_file(text, name)
    assert format_rule_file(again, again_classes) == text
    assert [(r.op, r.sl, r.tl) for r in again] == [(r.op, tuple(sorted(r.sl, key=lambda c: c.sort_key)),
                                                     tuple(sorted(r.tl, key=lambda c: c.sort_key))) for r in rules]


class TestVitFormat:
    def test_example_input(self):
        v = load_vit("bei.vit")
        assert v.lang == "de" and len(v.conds) == 7

    def test_empty_conds(self):
        assert parse_vit("lang: en\nconds:\n").conds == ()

    def test_orphan_sort_entry(self):
        with pytest.raises(VitFormatError):
            parse_vit("lang: de\nconds:\n  l1:a(i1)\nsorts:\n  i9=time\n")

    def test_variable_rejected(self):
        with pytest.raises(VitFormatError, match="variable"):
            parse_vit("lang: de\nconds:\n  L:a(i1)\n")

    def test_unknown_section(self):
        with pytest.raises(VitFormatError, match="unknown section"):
            parse_vit("lang: de\nscope:\n")

    def test_duplicate_condition(self):
        with pytest.raises(VitFormatError, match="duplicate"):
            parse_vit("lang: de\nconds:\n  l1:a(i1)\n  l1:a(i1)\n")

    def test_bracketed_list_accepted(self):
        v = parse_vit("lang: de\nconds:\n  [l1:echt(l2), l2:schlecht(i1),\n   l3:passen(i1)]\n")
        assert len(v.conds) == 3

    def test_canonical_round_trip_is_byte_exact(self):
        for name in ("bei.vit", "temp_loc.vit", "head_switch.vit"):
            text = format_vit(load_vit(name))
            assert format_vit(parse_vit(text)) == text

    def test_multi_document(self):
        vs = [load_vit("bei.vit"), load_vit("temp_loc.vit")]
        assert parse_vits(format_vits(vs)) == vs


class TestSortsFormat:
    def test_chain(self):
        h = parse_sorts("isa(temp_point,time). isa(time,entity).")
        assert h.subsumes("entity", "temp_point")

    def test_empty(self):
        assert parse_sorts("").sorts == {"top"}

    def test_cycle(self):
        with pytest.raises(SortHierarchyError, match="cycle"):
            parse_sorts("isa(a,b). isa(b,a).")

    def test_duplicate_edge(self):
        with pytest.raises(SortHierarchyError, match="duplicate"):
            parse_sorts("isa(a,b).\nisa(a,b).")

    def test_top_only_as_parent(self):
        assert parse_sorts("isa(a,top).").subsumes("top", "a")
        with pytest.raises(SortHierarchyError):
            parse_sorts("isa(top,a).")

    def test_round_trip(self):
        text = format_sorts(parse_sorts(read("domain.sorts")))
        assert format_sorts(parse_sorts(text)) == text


# -- property: generated rule files round trip ------------------------------------------

names = st.sampled_from(["a", "b", "c"])
variables = st.sampled_from(["X", "Y", "E", "L1"])
atom_args = st.lists(st.one_of(variables, st.sampled_from(["i1", "time"])), min_size=0, max_size=2)


@st.composite
def rule_texts(draw):
    # one fixed arity per predicate and side keeps the arity check satisfied
    def cset(side):
        items = draw(st.lists(st.tuples(names, st.sampled_from(["L", "L1", "l1"])), min_size=1, max_size=3))
        return "[" + ", ".join(f"{lab}:{side}{p}({','.join(['X'] * (ord(p) - 96))})" for p, lab in items) + "]"
    sl, tl = cset("s"), cset("t")
    conds = draw(st.sampled_from(["", ", [sort(X)=<time]", ", [ext(X, i1)]", ", [L1:sb(X,X)]"]))
    op = draw(st.sampled_from(["<->", "->", "<-"]))
    return f"{sl}{conds} {op} {tl}."


@settings(max_examples=150, deadline=None)
@given(st.lists(rule_texts(), min_size=1, max_size=5))
def test_rule_file_round_trip(texts):
    rules, classes = parse_rule_file("\n".join(texts))
    text = format_rule_file(rules, classes)
    assert format_rule_file(*parse_rule_file(text)) == text
