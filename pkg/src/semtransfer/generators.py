"""Seeded fixture generators: small random instances for differential tests
and a production-scale synthetic rule base for benchmarking.

Everything is produced as rule/Vit/sorts *text* and then parsed, so the
generated fixtures exercise the readers as well.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List

from .syntax import format_vit, parse_rule_file, parse_sorts, parse_vit
from .terms import FreshNames, Vit, instantiate

SOURCE_PREDS = {"a": 1, "b": 1, "c": 2, "d": 2}
TARGET_PREDS = {"p": 1, "q": 2, "r": 1, "s": 2}
RANDOM_SORTS = "isa(s1,s0).\nisa(s2,s0).\nisa(s3,s1).\nisa(s3,s2).\n"
_SORT_NAMES = ["s0", "s1", "s2", "s3"]


@dataclass
class RandomInstance:
    seed: int
    rules_text: str
    vit_text: str
    sorts_text: str

    def parsed(self):
        rules, classes = parse_rule_file(self.rules_text, source=f"random{self.seed}.rules")
        return rules, classes, parse_vit(self.vit_text), parse_sorts(self.sorts_text)


def _atom(pred: str, label: str, args: List[str]) -> str:
    return f"{label}:{pred}({','.join(args)})"


def random_instance(seed: int, max_rules: int = 15, max_conds: int = 10,
                    conditions: bool = True) -> RandomInstance:
    """A small random rule set plus input over a tiny vocabulary.

    Source patterns mostly use variables but sometimes constants; about a
    third of the rules carry a source condition (pattern or sort test).
    Target conditions and externals are never generated.
    """
    rng = random.Random(seed)
    lines = []
    for _ in range(rng.randint(0, max_rules)):
        n_sl = rng.choice([1, 1, 1, 2, 2, 3])
        sl, arg_vars = [], []
        for _ in range(n_sl):
            pred = rng.choice(list(SOURCE_PREDS))
            label = rng.choice(["L", "L", "L1"]) if rng.random() > 0.1 else rng.choice(["l1", "l2"])
            args = []
            for _ in range(SOURCE_PREDS[pred]):
                a = rng.choice(["X", "Y", "E"]) if rng.random() > 0.15 else rng.choice(["i1", "i2"])
                args.append(a)
                if a[0].isupper():
                    arg_vars.append(a)
            sl.append(_atom(pred, label, args))
        sl_vars = sorted(set(arg_vars))
        conds = []
        if conditions and rng.random() < 0.35:
            if sl_vars and rng.random() < 0.5:
                op = rng.choice(["=<", "=<~"])
                conds.append(f"sort({rng.choice(sl_vars)}){op}{rng.choice(_SORT_NAMES)}")
            else:
                pred = rng.choice(list(SOURCE_PREDS))
                args = [rng.choice(sl_vars + ["Z"]) for _ in range(SOURCE_PREDS[pred])]
                conds.append(_atom(pred, rng.choice(["L", "L9"]), args))
        tl = []
        pool = sl_vars + ["B"]
        for _ in range(rng.choice([0, 1, 1, 2, 2, 3])):
            pred = rng.choice(list(TARGET_PREDS))
            # L1 and A may be unbound on this side and then mint fresh labels.
            label = rng.choice(["L", "L", "L1", "A"])
            args = [rng.choice(pool) for _ in range(TARGET_PREDS[pred])]
            tl.append(_atom(pred, label, args))
        left = "[" + ", ".join(sl) + "]"
        if conds:
            left += ", [" + ", ".join(conds) + "]"
        op = rng.choice(["<->", "<->", "->"])
        lines.append(f"{left} {op} [{', '.join(tl)}].")
    conds_in = set()
    for _ in range(rng.randint(0, max_conds)):
        pred = rng.choice(list(SOURCE_PREDS))
        args = [rng.choice(["i1", "i2", "i3"]) for _ in range(SOURCE_PREDS[pred])]
        conds_in.add(_atom(pred, rng.choice(["l1", "l2", "l3"]), args))
    markers = sorted({a for c in conds_in for a in c[c.index("(") + 1:-1].split(",")})
    sorts = [f"{m}={rng.choice(_SORT_NAMES)}" for m in markers if rng.random() < 0.6]
    vit = "lang: de\nconds:\n" + "".join(f"  {c}\n" for c in sorted(conds_in))
    if sorts:
        vit += "sorts:\n" + "".join(f"  {s}\n" for s in sorts)
    return RandomInstance(seed, "\n".join(lines) + "\n", vit, RANDOM_SORTS)


# -- synthetic production-scale base ---------------------------------------------------

SYNTHETIC_SORTS = """\
isa(temp_point, time).
isa(time, entity).
isa(abstract, entity).
isa(person, entity).
"""
_SYNTH_SORT_VALUES = ["temp_point", "time", "abstract", "person", "entity"]


@dataclass
class SyntheticRuleSet:
    text: str
    lexical: list
    multi: list
    conditioned: list


def synthetic_rules(count: int, seed: int = 0) -> SyntheticRuleSet:
    """A rule file of *count* rules: lexical 1:1 rules, 10% multi-predicate, 5% conditioned.

    Each conditioned rule refines an existing lexical rule with a sort test,
    so the lexical rule serves as its default.
    """
    rng = random.Random(seed)
    n_multi = count // 10
    n_cond = count // 20
    n_lex = count - n_multi - n_cond
    lines, lexical, multi, conditioned = [], [], [], []
    for k in range(n_lex):
        if rng.random() < 0.7:
            lines.append(f"[L:de_w{k}(X)] <-> [L:en_w{k}(X)].")
            lexical.append((f"de_w{k}", 1))
        else:
            lines.append(f"[L:de_w{k}(E,X)] <-> [L:en_w{k}(E,X)].")
            lexical.append((f"de_w{k}", 2))
    for k in range(n_multi):
        lines.append(f"[L:de_v{k}(E), L:arg3(E,X), L1:de_n{k}(X)] <-> "
                     f"[L:en_v{k}(E), L:arg3(E,X), L1:en_n{k}(X)].")
        multi.append((f"de_v{k}", f"de_n{k}"))
    unary = [p for p, a in lexical if a == 1]
    for k in range(n_cond):
        base_pred = unary[k % len(unary)] if unary else None
        if base_pred is None:
            break
        op = rng.choice(["=<", "=<~"])
        sort = rng.choice(["time", "temp_point", "abstract"])
        lines.append(f"[L:{base_pred}(X)], [sort(X){op}{sort}] <-> [L:en_c{k}(X)].")
        conditioned.append(base_pred)
    return SyntheticRuleSet("".join(line + "\n" for line in lines), lexical, multi, conditioned)


def synthetic_input(rs: SyntheticRuleSet, size: int, rng: random.Random) -> tuple:
    """A Vit text of exactly *size* conditions and the number of rule applications it guarantees.

    Lexical items guarantee one application per condition, multi-predicate
    items one per three conditions, fillers (roles no rule mentions) none.
    A slack budget keeps applications at or above half the input size.
    """
    conds, sorts = [], []
    apps = 0
    label = marker = 0

    def new(prefix: str) -> str:
        nonlocal label, marker
        if prefix == "l":
            label += 1
            return f"l{label}"
        marker += 1
        return f"i{marker}"

    slack = size - (size + 1) // 2
    while len(conds) < size:
        room = size - len(conds)
        roll = rng.random()
        if roll < 0.15 and rs.multi and room >= 3 and slack >= 2:
            v, n = rng.choice(rs.multi)
            lab, lab1, e, x = new("l"), new("l"), new("i"), new("i")
            conds += [f"{lab}:{v}({e})", f"{lab}:arg3({e},{x})", f"{lab1}:{n}({x})"]
            apps += 1
            slack -= 2
        elif roll < 0.3 and slack > 0 and conds:
            conds.append(f"{new('l')}:arg1(i{rng.randint(1, max(marker, 1))},{new('i')})")
            slack -= 1
        elif rs.lexical:
            pred, arity = rng.choice(rs.lexical)
            x = new("i")
            args = x if arity == 1 else f"{new('i')},{x}"
            conds.append(f"{new('l')}:{pred}({args})")
            if rng.random() < 0.5:
                sorts.append(f"{x}={rng.choice(_SYNTH_SORT_VALUES)}")
            apps += 1
        else:
            conds.append(f"{new('l')}:arg1(i1,{new('i')})")
    text = "lang: de\nconds:\n" + "".join(f"  {c}\n" for c in conds)
    if sorts:
        text += "sorts:\n" + "".join(f"  {s}\n" for s in sorts)
    return text, apps


def synthetic_inputs(rs: SyntheticRuleSet, size: int, count: int, seed: int = 0) -> List[tuple]:
    rng = random.Random(seed + 1)
    return [synthetic_input(rs, size, rng) for _ in range(count)]


def inputs_from_rules(rules, size: int, count: int, seed: int = 0, lang: str = "de") -> List[str]:
    """Inputs for an arbitrary rule list: source sets of random rules, grounded with fresh constants."""
    rng = random.Random(seed + 1)
    usable = [r for r in rules if len(r.sl) <= size]
    out = []
    for _ in range(count):
        fresh = FreshNames(label_prefix="l", instance_prefix="i")
        conds: list = []
        for _ in range(10 * size):
            if not usable or len(conds) >= size:
                break
            r = rng.choice(usable)
            if len(conds) + len(r.sl) <= size:
                conds.extend(instantiate(r.sl, {}, fresh)[0])
        out.append(format_vit(Vit(lang, tuple(conds))))
    return out
