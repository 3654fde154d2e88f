"""
Sort tests, predicate classes and external hooks
================================================

Three ways a rule can depend on more than the conditions it consumes.
"""

from semtransfer import ExternalRegistry, compile_rules, parse_rule_file, parse_sorts, parse_vit, transfer

SORTS = parse_sorts("""
isa(temp_point,time).
isa(time,entity).
isa(abstract,entity).
""")


def vit(conds, sorts=""):
    text = "lang: de\nconds:\n" + "".join(f"  {c.strip()}\n" for c in conds.split(";"))
    if sorts:
        text += "sorts:\n  " + sorts + "\n"
    return parse_vit(text)


# %% Termin is "appointment" by default.  The conditioned rule is more specific
# and wins whenever the marker's sort is known and not below temp_point.
rules, classes = parse_rule_file("""
[L:termin(X)] <-> [L:appointment(X)].
[L:termin(X)], [sort(X)=<~temp_point] <-> [L:date(X)].
""")
termin = compile_rules(rules, classes, ("de", "en"), SORTS)
for sort in ("temp_point", "abstract", None):
    v = vit("l1:termin(i1)", f"i1={sort}" if sort else "")
    print(f"sort {sort!s:>10}: {transfer(v, termin)}")

# %% A class groups the German temporal prepositions.  On the source side it is
# expanded into one rule per member; on the target side it stays abstract and
# appears flagged with '#', leaving the preposition choice to generation.
rules, classes = parse_rule_file("""
type(de,temp_loc,[an,in,um,zu]).
type(en,temp_loc,[on,in,at]).
[temp_loc(E,X)],[sort(X)=<time] <-> [temp_loc(E,X)].
[L:dienstag(X)] <-> [L:tuesday(X)].
""")
prepositions = compile_rules(rules, classes, ("de", "en"), SORTS)
print(f"\n{len(prepositions.rules)} compiled rules:")
for r in prepositions.rules:
    print("  ", r)
print(transfer(vit("l1:an(i1,i2); l2:dienstag(i2)", "i2=time"), prepositions))

# %% Anything else, such as dialog act or anaphora tests, goes through a
# registry of named hooks.  A hook sees the ground arguments, the whole input
# and the sort hierarchy.
rules, classes = parse_rule_file("""
[L:hallo(X)], [greeting_turn(X)] -> [L:hello(X)].
[L:hallo(X)] -> [L:hi(X)].
""")
greetings = compile_rules(rules, classes, ("de", "en"))
formal = ExternalRegistry().register("greeting_turn", 1, lambda args, v, onto: len(v.conds) > 1)
print()
print(transfer(vit("l1:hallo(i1)"), greetings, formal))
print(transfer(vit("l1:hallo(i1); l2:herr(i1)"), greetings, formal))
