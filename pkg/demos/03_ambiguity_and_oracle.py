"""
Ties, alternatives and the exhaustive oracle
============================================

The engine commits greedily to the most specific rule.  When two rules are
equally specific, ``transfer_all`` enumerates the alternatives; the oracle
enumerates every maximal derivation regardless of specificity.
"""

from semtransfer import compile_rules, oracle_transfer, parse_rule_file, parse_vit, transfer, transfer_all

rules, classes = parse_rule_file("""
[L:bank(X)] <-> [L:bench(X)].
[L:bank(X)] <-> [L:bank(X)].
[L:am(E,X), L1:bank(X)] <-> [L:at(E,X), L1:bank(X)].
""")
base = compile_rules(rules, classes, ("de", "en"))
alone = parse_vit("lang: de\nconds:\n  l1:bank(i1)\n")
with_prep = parse_vit("lang: de\nconds:\n  l1:am(i2,i1)\n  l2:bank(i1)\n")

# %% A tie: both lexical rules have the same key. The first answer is the one
# plain transfer gives (file order breaks ties).
print("transfer:     ", transfer(alone, base))
print("alternatives: ", [str(v) for v in transfer_all(alone, base)])

# %% With the preposition present the two-condition rule blocks both readings.
print("blocked:      ", [str(v) for v in transfer_all(with_prep, base)])

# %% The oracle lists every maximal set of non-overlapping rule applications.
# The greedy answer is the derivation with the smallest signature.
result = oracle_transfer(with_prep, base)
for d in sorted(result.derivations, key=lambda d: d.signature):
    print(d.signature, d.output)
print("most specific:", result.most_specific)
