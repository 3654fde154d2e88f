"""Static validation of rule files (the ``check`` command)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .compiler import (BACKWARD_DIRECTION, FORWARD_DIRECTION, check_classes, expand_classes, orient,
                       specificity_key, CompiledRule)
from .errors import CompileError
from .sorts import SortHierarchy
from .syntax import PATTERN, SORT_LEQ, SORT_NOT_LEQ, ClassDef, TransferRule
from .terms import LabeledCondition, Term, find_renaming

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.severity}: {self.message}"


def _encode(rule: TransferRule) -> List[LabeledCondition]:
    """Flatten a whole rule into one condition list so variable renaming is shared by all parts."""
    out = list(rule.sl)
    out += [c.with_predicate(">" + c.predicate) for c in rule.tl]
    anon = Term("var", "?")
    for k, c in enumerate(rule.sl_conds + rule.tl_conds):
        side = "<" if k < len(rule.sl_conds) else ">"
        if c.kind == PATTERN:
            out.append(c.payload.with_predicate(f"{side}?{c.payload.predicate}"))
        elif c.kind in (SORT_LEQ, SORT_NOT_LEQ):
            out.append(LabeledCondition(anon, f"{side}{c.kind}:{c.payload[1]}", (c.payload[0],)))
        else:
            out.append(LabeledCondition(anon, f"{side}ext:{c.payload[0]}", tuple(c.payload[1])))
    return out


def _is_var(t: Term) -> bool:
    return t.kind == "var"


def rules_alpha_equal(a: TransferRule, b: TransferRule) -> bool:
    return a.op == b.op and find_renaming(_encode(a), _encode(b), _is_var) is not None


def sl_alpha_equal(a, b) -> bool:
    return find_renaming(list(a.sl), list(b.sl), _is_var) is not None


def check_rules(rules: Sequence[TransferRule], classes: Sequence[ClassDef] = (),
                hierarchy: Optional[SortHierarchy] = None,
                pair: Optional[Tuple[str, str]] = None) -> List[Finding]:
    findings: List[Finding] = []
    # Without a language pair any declared language is acceptable.
    langs = pair or {c.lang for c in classes}
    for problem in dict.fromkeys(check_classes(classes, langs)):
        findings.append(Finding(ERROR, "classes", problem))

    class_names = {c.name for c in classes}
    for r in rules:
        for c in r.sl + r.tl:
            if c.class_flag and c.predicate not in class_names:
                findings.append(Finding(ERROR, str(r.provenance), f"unknown class {c.predicate}"))
        if not r.sl:
            findings.append(Finding(ERROR, str(r.provenance), "empty source set"))
        if hierarchy is not None:
            for c in r.sl_conds + r.tl_conds:
                if c.kind in (SORT_LEQ, SORT_NOT_LEQ) and c.payload[1] not in hierarchy:
                    findings.append(Finding(ERROR, str(r.provenance), f"unknown sort {c.payload[1]}"))

    if pair:
        for direction, (src, tgt) in ((FORWARD_DIRECTION, pair), (BACKWARD_DIRECTION, pair[::-1])):
            for r in orient(rules, direction):
                try:
                    expand_classes(r, classes, src, tgt)
                except CompileError as exc:
                    for p in exc.problems:
                        findings.append(Finding(ERROR, str(r.provenance), p.split(": ", 1)[-1]))

    duplicates = set()
    by_shape: dict = {}
    for r in rules:
        by_shape.setdefault(tuple(sorted(c.key for c in r.sl)), []).append(r)
    for group in by_shape.values():
        for i, b in enumerate(group):
            for a in group[:i]:
                if rules_alpha_equal(a, b):
                    duplicates.add(b.provenance.ordinal)
                    findings.append(Finding(WARNING, str(b.provenance), f"duplicate of rule at {a.provenance}"))
                    break

    for direction in (FORWARD_DIRECTION, BACKWARD_DIRECTION):
        oriented = [r for r in orient(rules, direction) if r.provenance.ordinal not in duplicates]
        compiled = sorted((CompiledRule(r.sl, r.tl, r.sl_conds, r.tl_conds, r.provenance) for r in oriented),
                          key=specificity_key)
        groups: dict = {}
        for r in compiled:
            groups.setdefault(r.signature, []).append(r)
        for group in groups.values():
            for i, b in enumerate(group):
                for a in group[:i]:
                    if not a.src_conds and not a.tgt_conds and sl_alpha_equal(a, b):
                        findings.append(Finding(WARNING, str(b.provenance),
                                                f"never applies {direction}: shadowed by rule at {a.provenance} "
                                                f"with the same source set"))
                        break
    return list(dict.fromkeys(findings))


def has_errors(findings: Sequence[Finding]) -> bool:
    return any(f.severity == ERROR for f in findings)
