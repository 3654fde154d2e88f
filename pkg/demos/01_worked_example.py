"""
Translating one sentence and back
=================================

German "Das passt echt schlecht bei mir" arrives as a flat list of labeled
conditions.  Four transfer rules and the copy-through metarule turn it into
the English semantics for "That really doesn't suit me well", and the same
rules, compiled the other way round, bring it back.
"""

from semtransfer import compile_rules, parse_rule_file, parse_vit, run_transfer, transfer, vit_alpha_equal
from semtransfer.engine import format_trace
from semtransfer.syntax import format_vit

RULES = """
[L:echt(A)] <-> [L:real(A)].
[L:passen(E),L:arg3(E,Y),L1:bei(E,X)] <-> [L:suit(E),L:arg2(E,X),L:arg3(E,Y)].
[L:schlecht(E)],[L1:passen(E)] <-> [L:neg(A),A:good(E)].
[L:ich(X)] <-> [L:ego(X)].
"""

GERMAN = """
lang: de
conds:
  l1:echt(l2)
  l2:schlecht(i1)
  l3:passen(i1)
  l3:arg3(i1,i2)
  l4:pron(i2)
  l5:bei(i1,i3)
  l6:ich(i3)
"""

rules, classes = parse_rule_file(RULES, "sentence.rules")
german = parse_vit(GERMAN)

# %% Compile a German-to-English base. Rules are sorted most specific first,
# so the three-condition passen rule is tried before anything else.
de_en = compile_rules(rules, classes, ("de", "en"))
for rule in de_en.rules:
    print(rule.specificity.prefix, rule)

# %% Transfer. The trace shows which rule consumed what; pron has no rule and
# is copied by the metarule.  The schlecht rule still sees passen even though
# the passen rule consumed it first: conditions look at the original input.
result = run_transfer(german, de_en)
print()
print(format_trace(result.trace))
print(format_vit(result.output))

# %% Backward: the same file compiled English-to-German.  The schlecht rule now
# carries its passen test on the German side, which is checked once the German
# output is complete.
en_de = compile_rules(rules, classes, ("en", "de"), pair=("de", "en"))
back = run_transfer(result.output, en_de)
print(format_trace(back.trace))
print("round trip recovers the input:", vit_alpha_equal(back.output, german))
assert vit_alpha_equal(transfer(result.output, en_de), german)
