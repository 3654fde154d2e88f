"""Naive, exhaustive reference implementation used as ground truth in tests.

Nothing here shares code with the indexed retrieval, the bucketed matcher
or the greedy control of the engine: candidates come from direct multiset
comparison, matches from brute force over all injective assignments, and
derivations from enumerating every maximal set of pairwise disjoint rule
applications.  It is exponential and refuses large instances.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .compiler import RuleBase
from .errors import OracleLimitError
from .syntax import EXTERNAL, PATTERN, SORT_LEQ
from .terms import LabeledCondition, Term, Vit, vit_alpha_equal

MAX_CONDS = 12
MAX_RULES = 40
MAX_STATES = 200_000


def _pred_multiset(conds) -> Counter:
    return Counter((c.predicate, len(c.args), c.class_flag) for c in conds)


def oracle_candidates(rules: Sequence, conds: Sequence[LabeledCondition]) -> set:
    """Positions of rules whose source predicate multiset is included in the input's."""
    have = _pred_multiset(conds)
    out = set()
    for i, r in enumerate(rules):
        need = _pred_multiset(r.sl)
        if all(have[k] >= n for k, n in need.items()):
            out.add(i)
    return out


def _bind(pattern: LabeledCondition, ground: LabeledCondition, s: dict) -> Optional[dict]:
    if (pattern.predicate, len(pattern.args), pattern.class_flag) != (
            ground.predicate, len(ground.args), ground.class_flag):
        return None
    s = dict(s)
    for p, g in zip((pattern.label,) + pattern.args, (ground.label,) + ground.args):
        if p.kind == "var":
            if s.setdefault(p.name, g) != g:
                return None
        elif p != g:
            return None
    return s


def _all_matches(patterns: Sequence[LabeledCondition], ground: Sequence[LabeledCondition], s: dict):
    """Every injective assignment of patterns to ground positions, lexicographic order."""
    for positions in itertools.permutations(range(len(ground)), len(patterns)):
        cur: Optional[dict] = s
        for p, i in zip(patterns, positions):
            cur = _bind(p, ground[i], cur)
            if cur is None:
                break
        if cur is not None:
            yield cur, positions


def _ancestors(base: RuleBase, sort: str) -> set:
    seen, todo = {sort}, [sort]
    while todo:
        for p in base.ontology.parents.get(todo.pop(), ()):
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def _holds(conds, s: dict, ground: Sequence[LabeledCondition], sorts: Dict[str, str],
           base: RuleBase) -> Optional[dict]:
    if not conds:
        return s
    c, rest = conds[0], conds[1:]
    if c.kind == PATTERN:
        for g in ground:
            s2 = _bind(c.payload, g, s)
            if s2 is not None:
                found = _holds(rest, s2, ground, sorts, base)
                if found is not None:
                    return found
        return None
    if c.kind == EXTERNAL:
        raise OracleLimitError("the oracle does not evaluate external predicates")
    subject, general = c.payload
    marker = s[subject.name] if subject.kind == "var" else subject
    specific = sorts.get(marker.name)
    if specific is None:
        return None
    below = general in _ancestors(base, specific)
    if below != (c.kind == SORT_LEQ):
        return None
    return _holds(rest, s, ground, sorts, base)


def _ground_tl(templates, s: dict, counters: dict, taken: set) -> list:
    s = dict(s)
    labels = {c.label.name for c in templates if c.label.kind == "var"}

    def val(t: Term) -> Term:
        if t.kind != "var":
            return t
        if t.name not in s:
            prefix = "t" if t.name in labels else "j"
            while True:
                counters[prefix] += 1
                name = f"{prefix}{counters[prefix]}"
                if name not in taken:
                    taken.add(name)
                    break
            s[t.name] = Term("const", name)
        return s[t.name]

    return [LabeledCondition(val(c.label), c.predicate, tuple(val(a) for a in c.args), c.class_flag)
            for c in templates], s


@dataclass
class Derivation:
    signature: tuple
    output: Vit
    valid: bool


@dataclass
class OracleResult:
    derivations: List[Derivation]
    outputs: List[Vit]
    most_specific: Optional[Vit]


def oracle_transfer(vit: Vit, base: RuleBase, max_conds: int = MAX_CONDS,
                    max_rules: int = MAX_RULES) -> OracleResult:
    """Enumerate all maximal derivations of *vit* under *base*.

    A derivation is a maximal set of pairwise disjoint applicable rule
    applications, leftovers copied through, target conditions checked on
    the result.  Its signature is the sorted list of (rule position, matched
    positions) keys; the smallest valid signature is the most specific cover.
    """
    if len(vit.conds) > max_conds or len(base.rules) > max_rules:
        raise OracleLimitError(f"instance too large for the oracle: {len(vit.conds)} conditions, "
                               f"{len(base.rules)} rules")
    ground = list(vit.conds)
    apps = []
    for pos, rule in enumerate(base.rules):
        for s, positions in _all_matches(rule.sl, ground, {}):
            full = _holds(rule.src_conds, s, ground, vit.sorts, base)
            if full is not None:
                apps.append(((pos, positions), rule, full, frozenset(positions)))

    chosen_sets: List[list] = []
    states = 0

    def search(k: int, chosen: list, used: frozenset) -> None:
        nonlocal states
        states += 1
        if states > MAX_STATES:
            raise OracleLimitError("too many derivation states")
        if k == len(apps):
            if all(a[3] & used for a in apps if a not in chosen):
                chosen_sets.append(list(chosen))
            return
        app = apps[k]
        if not (app[3] & used):
            chosen.append(app)
            search(k + 1, chosen, used | app[3])
            chosen.pop()
        search(k + 1, chosen, used)

    search(0, [], frozenset())

    taken = {t.name for c in ground for t in (c.label,) + c.args}
    derivations = []
    for chosen in chosen_sets:
        counters = {"t": 0, "j": 0}
        names = set(taken)
        out: list = []
        pending = []
        used: set = set()
        for key, rule, s, pos in chosen:
            produced, full = _ground_tl(rule.tl, s, counters, names)
            out.extend(produced)
            used |= pos
            if rule.tgt_conds:
                pending.append((rule, full))
        out.extend(c for i, c in enumerate(ground) if i not in used)
        result_names = {t.name for c in out for t in (c.label,) + c.args}
        sorts = {m: v for m, v in vit.sorts.items() if m in result_names}
        output = Vit(base.target, tuple(out), sorts)
        valid = all(_holds(rule.tgt_conds, full, list(output.conds), output.sorts, base) is not None
                    for rule, full in pending)
        derivations.append(Derivation(tuple(sorted(a[0] for a in chosen)), output, valid))

    outputs: List[Vit] = []
    for d in derivations:
        if d.valid and not any(vit_alpha_equal(d.output, o) for o in outputs):
            outputs.append(d.output)
    valid = [d for d in derivations if d.valid]
    best = min(valid, key=lambda d: d.signature).output if valid else None
    return OracleResult(derivations, outputs, best)
