"""Compile parsed transfer rules into direction-specific, indexed rule bases.

Compilation runs orient -> expand classes -> key -> sort -> index.  The
result for each translation direction is an immutable :class:`RuleBase`
whose rule list is in specificity order (most specific first).
"""

from __future__ import annotations

import functools
import itertools
import pickle
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CompileError, SemTransferError
from .sorts import SortHierarchy
from .syntax import (BACKWARD, BIDIRECTIONAL, FORWARD, PATTERN, SORT_LEQ, SORT_NOT_LEQ,
                     ClassDef, Condition, Provenance, TransferRule)
from .terms import VAR, LabeledCondition

FORWARD_DIRECTION = "forward"
BACKWARD_DIRECTION = "backward"

BLOB_MAGIC = b"SEMTRANSFER-RULEBASE"
BLOB_VERSION = 1


def orient(rules: Iterable[TransferRule], direction: str) -> List[TransferRule]:
    """Keep the rules usable in *direction*, swapping sides for backward application."""
    if direction == FORWARD_DIRECTION:
        return [r for r in rules if r.op in (BIDIRECTIONAL, FORWARD)]
    if direction == BACKWARD_DIRECTION:
        return [TransferRule(r.tl, FORWARD, r.sl, r.tl_conds, r.sl_conds, r.provenance)
                for r in rules if r.op in (BIDIRECTIONAL, BACKWARD)]
    raise ValueError(f"direction must be {FORWARD_DIRECTION!r} or {BACKWARD_DIRECTION!r}")


# -- class expansion ------------------------------------------------------------------

def _class_table(classes: Iterable[ClassDef]) -> Dict[Tuple[str, str], ClassDef]:
    return {(c.lang, c.name): c for c in classes}


def check_classes(classes: Sequence[ClassDef], languages: Iterable[str]) -> List[str]:
    """Problems with the class definitions themselves (language, name/member ambiguity)."""
    languages = set(languages)
    problems = []
    for c in classes:
        where = f"{c.provenance}: " if c.provenance else ""
        if c.lang not in languages:
            problems.append(f"{where}class {c.name} declared for unknown language {c.lang!r}")
        for other in classes:
            if other.lang == c.lang and c.name in other.members:
                problems.append(f"{where}{c.name} is both a class and a member of class "
                                f"{other.name} in language {c.lang}")
    return problems


def expand_classes(rule: TransferRule, classes: Sequence[ClassDef],
                   source_lang: str, target_lang: str) -> List[TransferRule]:
    """Expand source-side class tokens into their members; flag target-side ones.

    Several source-side class tokens give the cartesian product of their
    member lists.  Raises CompileError for a class token of the wrong
    language.
    """
    table = _class_table(classes)
    names_by_lang: Dict[str, set] = {}
    for lang, name in table:
        names_by_lang.setdefault(lang, set()).add(name)
    other_names = {n for lang, ns in names_by_lang.items() for n in ns}

    def source_slot(c: LabeledCondition) -> Optional[tuple]:
        if (source_lang, c.predicate) in table:
            return table[source_lang, c.predicate].members
        if c.predicate in other_names or c.class_flag:
            raise CompileError([f"{rule.provenance}: class {c.predicate} is not defined for "
                                f"source language {source_lang}"])
        return None

    def target_cond(c: LabeledCondition) -> LabeledCondition:
        if (target_lang, c.predicate) in table:
            return c.with_predicate(c.predicate, class_flag=True)
        if c.predicate in other_names or c.class_flag:
            raise CompileError([f"{rule.provenance}: class {c.predicate} is not defined for "
                                f"target language {target_lang}"])
        return c

    tl = tuple(target_cond(c) for c in rule.tl)
    tl_conds = tuple(Condition(PATTERN, target_cond(c.payload)) if c.kind == PATTERN else c
                     for c in rule.tl_conds)

    # Slots: positions in sl, then positions of pattern conditions in sl_conds.
    slots = []
    for i, c in enumerate(rule.sl):
        members = source_slot(c)
        if members is not None:
            slots.append(("sl", i, members))
    for i, c in enumerate(rule.sl_conds):
        if c.kind == PATTERN:
            members = source_slot(c.payload)
            if members is not None:
                slots.append(("cond", i, members))

    if not slots:
        return [replace(rule, tl=tl, tl_conds=tl_conds)]
    out = []
    for combo in itertools.product(*(s[2] for s in slots)):
        sl = list(rule.sl)
        sl_conds = list(rule.sl_conds)
        for (where, i, _), member in zip(slots, combo):
            if where == "sl":
                sl[i] = sl[i].with_predicate(member, class_flag=False)
            else:
                sl_conds[i] = Condition(PATTERN, sl_conds[i].payload.with_predicate(member, class_flag=False))
        sl = tuple(sorted(sl, key=lambda c: c.sort_key))
        out.append(TransferRule(sl, rule.op, tl, tuple(sl_conds), tl_conds, rule.provenance))
    return out


# -- specificity ------------------------------------------------------------------------

@functools.total_ordering
@dataclass(frozen=True)
class SpecificityKey:
    """Orders rules most-specific first.

    Larger source sets win, then more conditions, then more constants in the
    source set; file position (and expansion variant) breaks remaining ties.
    ``a < b`` means *a* is tried before *b*.
    """

    sl_cardinality: int
    cond_count: int
    instantiation: int
    ordinal: int
    variant: int = 0

    @property
    def prefix(self) -> tuple:
        return (self.sl_cardinality, self.cond_count, self.instantiation)

    def _order(self) -> tuple:
        return (-self.sl_cardinality, -self.cond_count, -self.instantiation, self.ordinal, self.variant)

    def __lt__(self, other: "SpecificityKey") -> bool:
        return self._order() < other._order()


@dataclass(frozen=True)
class CompiledRule:
    sl: tuple
    tl: tuple
    src_conds: tuple
    tgt_conds: tuple
    provenance: Provenance
    variant: int = 0
    specificity: Optional[SpecificityKey] = field(default=None, compare=False)

    @property
    def signature(self) -> tuple:
        return tuple(sorted(c.key for c in self.sl))

    def __str__(self) -> str:
        from .syntax import format_rule

        return format_rule(TransferRule(self.sl, FORWARD, self.tl, self.src_conds,
                                        self.tgt_conds, self.provenance))


def specificity_key(rule) -> SpecificityKey:
    instantiation = sum(1 for c in rule.sl for t in c.terms() if t.kind != VAR)
    return SpecificityKey(
        sl_cardinality=len(rule.sl),
        cond_count=len(rule.src_conds) + len(rule.tgt_conds),
        instantiation=instantiation,
        ordinal=rule.provenance.ordinal,
        variant=getattr(rule, "variant", 0),
    )


# -- index --------------------------------------------------------------------------------

class _TrieNode:
    __slots__ = ("children", "rules")

    def __init__(self):
        self.children: Dict[tuple, _TrieNode] = {}
        self.rules: List[int] = []


class RuleIndex:
    """Candidate retrieval by predicate-multiset inclusion.

    Each rule's source predicates, sorted, form its signature; signatures
    share prefixes in a trie.  Retrieval walks the trie consuming symbols
    from the input's predicate multiset, so it only visits paths the input
    can pay for.
    """

    def __init__(self, rules: Sequence[CompiledRule]):
        self.by_predicate: Dict[tuple, frozenset] = {}
        self.signatures: List[tuple] = []
        self.root = _TrieNode()
        groups: Dict[tuple, list] = {}
        for i, r in enumerate(rules):
            sig = r.signature
            self.signatures.append(sig)
            for key in set(sig):
                groups.setdefault(key, []).append(i)
            node = self.root
            for key in sig:
                node = node.children.setdefault(key, _TrieNode())
            node.rules.append(i)
        self.by_predicate = {k: frozenset(v) for k, v in groups.items()}

    def __len__(self) -> int:
        return len(self.signatures)

    def candidates(self, conds: Iterable[LabeledCondition]) -> List[int]:
        """Positions of rules whose signature is included in the predicates of *conds*, ascending."""
        counts = Counter(c.key for c in conds)
        symbols = sorted(counts)
        out: List[int] = []

        def walk(node: _TrieNode, start: int) -> None:
            out.extend(node.rules)
            children = node.children
            for j in range(start, len(symbols)):
                s = symbols[j]
                child = children.get(s)
                if child is None or not counts[s]:
                    continue
                counts[s] -= 1
                walk(child, j)
                counts[s] += 1

        walk(self.root, 0)
        out.sort()
        return out

    def scan(self, conds: Iterable[LabeledCondition]) -> List[int]:
        """Index-free reference retrieval: test every signature against the input multiset."""
        counts = Counter(c.key for c in conds)
        out = []
        for i, sig in enumerate(self.signatures):
            need = Counter(sig)
            if all(counts[k] >= n for k, n in need.items()):
                out.append(i)
        return out


def build_index(rules: Sequence[CompiledRule]) -> RuleIndex:
    return RuleIndex(rules)


# -- rule base -----------------------------------------------------------------------------

@dataclass(frozen=True)
class RuleBase:
    source: str
    target: str
    rules: tuple
    index: RuleIndex = field(repr=False)
    classes: tuple = ()
    ontology: SortHierarchy = field(default_factory=lambda: SortHierarchy({}), repr=False)

    @property
    def direction(self) -> Tuple[str, str]:
        return (self.source, self.target)

    def candidates(self, conds: Iterable[LabeledCondition], use_index: bool = True) -> List[int]:
        if use_index:
            return self.index.candidates(conds)
        return list(range(len(self.rules)))


def _side_arities(rules: Sequence[CompiledRule]) -> List[str]:
    problems = []
    seen: dict = {}
    for r in rules:
        src = r.sl + tuple(c.payload for c in r.src_conds if c.kind == PATTERN)
        tgt = r.tl + tuple(c.payload for c in r.tgt_conds if c.kind == PATTERN)
        for side, conds in (("source", src), ("target", tgt)):
            for c in conds:
                prev = seen.setdefault((side, c.predicate), (c.arity, r.provenance))
                if prev[0] != c.arity:
                    problems.append(f"{r.provenance}: {c.predicate} has arity {c.arity} on the {side} "
                                    f"side but arity {prev[0]} at {prev[1]}")
                    seen[(side, c.predicate)] = (c.arity, r.provenance)
    return problems


def _sort_symbols(rule: CompiledRule) -> Iterable[str]:
    for c in rule.src_conds + rule.tgt_conds:
        if c.kind in (SORT_LEQ, SORT_NOT_LEQ):
            yield c.payload[1]


def compile_rules(rules: Sequence[TransferRule], classes: Sequence[ClassDef] = (),
                  direction: Tuple[str, str] = ("de", "en"),
                  ontology: Optional[SortHierarchy] = None,
                  pair: Optional[Tuple[str, str]] = None) -> RuleBase:
    """Compile rules for translating ``direction[0]`` into ``direction[1]``.

    *pair* names the (left, right) languages of the rule files; it defaults
    to *direction*, i.e. the rules are applied left to right.  Passing the
    reverse of *pair* as *direction* compiles the backward base.
    """
    source, target = direction
    pair = tuple(pair) if pair else (source, target)
    if (source, target) == pair:
        orientation = FORWARD_DIRECTION
    elif (target, source) == pair:
        orientation = BACKWARD_DIRECTION
    else:
        raise CompileError([f"direction {source}->{target} does not fit rule language pair "
                            f"{pair[0]}/{pair[1]}"])

    problems = check_classes(classes, pair)
    compiled: List[CompiledRule] = []
    for rule in orient(rules, orientation):
        try:
            variants = expand_classes(rule, classes, source, target)
        except CompileError as exc:
            problems.extend(exc.problems)
            continue
        for v, r in enumerate(variants):
            cr = CompiledRule(r.sl, r.tl, r.sl_conds, r.tl_conds, r.provenance, v if len(variants) > 1 else 0)
            compiled.append(replace(cr, specificity=specificity_key(cr)))
    problems.extend(_side_arities(compiled))
    if ontology is not None:
        for r in compiled:
            for s in _sort_symbols(r):
                if s not in ontology:
                    problems.append(f"{r.provenance}: unknown sort {s!r}")
    if problems:
        raise CompileError(list(dict.fromkeys(problems)))

    compiled.sort(key=lambda r: r.specificity)
    target_classes = tuple(c for c in classes if c.lang == target)
    return RuleBase(source, target, tuple(compiled), build_index(compiled), target_classes,
                    ontology if ontology is not None else SortHierarchy({}))


def save_rulebase(base: RuleBase, path: str) -> None:
    """Write a compiled base as a versioned blob. Loading it is an optimization only."""
    with open(path, "wb") as fh:
        fh.write(BLOB_MAGIC + bytes([BLOB_VERSION]))
        pickle.dump(base, fh, protocol=pickle.HIGHEST_PROTOCOL)


def load_rulebase(path: str) -> RuleBase:
    with open(path, "rb") as fh:
        head = fh.read(len(BLOB_MAGIC) + 1)
        if head[:-1] != BLOB_MAGIC or head[-1] != BLOB_VERSION:
            raise SemTransferError(f"{path}: not a version {BLOB_VERSION} compiled rule base")
        return pickle.load(fh)
