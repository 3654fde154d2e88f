"""Apply a compiled rule base to a ground Vit.

Control is greedy and most-specific-first: rules are tried in specificity
order, the first match whose source conditions hold is applied, its matched
conditions are removed from the working set and its target set is
instantiated into the output.  Whatever no rule consumed is copied through
unchanged (the metarule).  Produced material is never matched again.

Source-side conditions are filters over the *original* input and consume
nothing.  Target-side conditions can only be judged once the output is
complete, so they are queued and checked at the end; an application whose
target conditions fail is excluded and the derivation is redone.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .compiler import CompiledRule, RuleBase
from .errors import ExternalNotRegistered, SemTransferError, TransferError, UnknownSortError
from .sorts import SortHierarchy, sort_of
from .syntax import EXTERNAL, PATTERN, SORT_LEQ, SORT_NOT_LEQ, Condition, Provenance, _vit_conds
from .terms import (VAR, FreshNames, LabeledCondition, Term, Vit, bucket, canonical, format_bindings,
                    instantiate, match_buckets, vit_alpha_equal)

SOURCE = "source"
TARGET = "target"

RULE_APPLIED = "rule-applied"
RULE_BLOCKED = "rule-blocked-by-conditions"
METARULE_COPY = "metarule-copy"
TGT_COND_CHECKED = "tgt-cond-checked"

MAX_ROUNDS = 10_000

ExternalFn = Callable[[Tuple[str, ...], Vit, SortHierarchy], bool]


class ExternalRegistry:
    """Named predicates callable from rule conditions, keyed by (name, arity).

    Hooks get the ground arguments (as constant names), the original input
    Vit and the sort hierarchy, and return a truth value.  Registries are
    immutable; :meth:`register` returns an extended copy.
    """

    def __init__(self, hooks: Optional[Mapping[Tuple[str, int], ExternalFn]] = None):
        self._hooks: Dict[Tuple[str, int], ExternalFn] = dict(hooks or {})

    def register(self, name: str, arity: int, fn: ExternalFn) -> "ExternalRegistry":
        if (name, arity) in self._hooks:
            raise ValueError(f"external predicate {name}/{arity} is already registered")
        hooks = dict(self._hooks)
        hooks[name, arity] = fn
        return ExternalRegistry(hooks)

    def lookup(self, name: str, arity: int) -> Optional[ExternalFn]:
        return self._hooks.get((name, arity))

    def __contains__(self, key: Tuple[str, int]) -> bool:
        return key in self._hooks

    def __len__(self) -> int:
        return len(self._hooks)


def register_external(reg: ExternalRegistry, name: str, arity: int, fn: ExternalFn) -> ExternalRegistry:
    return reg.register(name, arity, fn)


@dataclass
class TraceEvent:
    kind: str
    provenance: Optional[Provenance] = None
    bindings: Mapping[str, Term] = field(default_factory=dict)
    consumed: tuple = ()
    produced: tuple = ()
    condition: str = ""
    verdict: Optional[bool] = None

    def __str__(self) -> str:
        where = os.path.basename(self.provenance.file) + f":{self.provenance.line}" if self.provenance else ""
        if self.kind == RULE_APPLIED:
            consumed = ", ".join(str(c) for c in canonical(self.consumed))
            produced = ", ".join(str(c) for c in canonical(self.produced))
            return f"APPLY {where} {format_bindings(self.bindings)} -{{{consumed}}}- +{{{produced}}}+"
        if self.kind == RULE_BLOCKED:
            return f"BLOCK {where} {format_bindings(self.bindings)}"
        if self.kind == METARULE_COPY:
            return f"COPY {self.produced[0]}"
        return f"CHECK {self.condition} {'true' if self.verdict else 'false'}"


def format_trace(trace: Sequence[TraceEvent]) -> str:
    return "".join(f"{e}\n" for e in trace)


_PRODUCED_RE = re.compile(r"\+\{(.*)\}\+\s*\Z")


def replay_trace(text: str) -> tuple:
    """Rebuild the output condition set from serialized APPLY and COPY lines."""
    out: list = []
    for n, line in enumerate(text.splitlines(), 1):
        if line.startswith("APPLY "):
            m = _PRODUCED_RE.search(line)
            if m is None:
                raise SemTransferError(f"trace line {n}: no produced set")
            if m.group(1).strip():
                out.extend(_vit_conds(m.group(1), "<trace>", n))
        elif line.startswith("COPY "):
            out.extend(_vit_conds(line[5:], "<trace>", n))
    return canonical(out)


@dataclass(frozen=True)
class Application:
    rule_pos: int
    rule: CompiledRule
    subst: Mapping[str, Term]
    positions: tuple
    consumed: tuple

    @property
    def key(self) -> tuple:
        return (self.rule_pos, self.positions)


class TransferContext:
    """Mutable state of one transfer run; never shared between runs."""

    def __init__(self, vit: Vit, base: RuleBase, externals: Optional[ExternalRegistry] = None,
                 excluded: frozenset = frozenset(), use_index: bool = True):
        self.original_input = vit
        self.base = base
        self.conds = vit.conds
        self.buckets = bucket(self.conds)
        self.used: set = set()
        self.output: list = []
        self.fresh = FreshNames(t.name for c in vit.conds for t in c.terms())
        self.externals = externals if externals is not None else ExternalRegistry()
        self.ontology = base.ontology
        self.pending_tgt_conds: list = []
        self.trace: List[TraceEvent] = []
        self.applications: List[Application] = []
        self.excluded = excluded
        self.output_vit: Optional[Vit] = None
        self._output_buckets: Optional[dict] = None
        self._candidates = base.candidates(vit.conds, use_index)
        self._cursor = 0
        self._blocked: set = set()

    @property
    def remaining(self) -> tuple:
        return tuple(c for i, c in enumerate(self.conds) if i not in self.used)

    @property
    def consumed(self) -> tuple:
        return tuple(c for i, c in enumerate(self.conds) if i in self.used)


# -- conditions --------------------------------------------------------------------------

def _resolve(t: Term, subst: Mapping[str, Term], cond: Condition, rule: Optional[CompiledRule]) -> Term:
    if t.kind != VAR:
        return t
    b = subst.get(t.name)
    if b is None:
        where = f"{rule.provenance}: " if rule else ""
        raise TransferError(f"{where}variable {t} in condition {cond} is unbound")
    return b


def _solutions(c: Condition, subst: Mapping[str, Term], ctx: TransferContext, side: str,
               rule: Optional[CompiledRule] = None) -> Iterator[Mapping[str, Term]]:
    if c.kind == PATTERN:
        buckets = ctx.buckets if side == SOURCE else ctx._output_buckets
        for s, _ in match_buckets((c.payload,), buckets, (), subst):
            yield s
        return
    if c.kind in (SORT_LEQ, SORT_NOT_LEQ):
        subject, general = c.payload
        marker = _resolve(subject, subst, c, rule)
        table = ctx.original_input if side == SOURCE else ctx.output_vit
        specific = sort_of(table, marker)
        if specific is None:
            return
        try:
            below = ctx.ontology.subsumes(general, specific)
        except UnknownSortError as exc:
            where = f"{rule.provenance}: " if rule else ""
            raise TransferError(f"{where}{exc}") from None
        if below == (c.kind == SORT_LEQ):
            yield subst
        return
    if c.kind == EXTERNAL:
        name, args = c.payload
        fn = ctx.externals.lookup(name, len(args))
        if fn is None:
            where = f"{rule.provenance}: " if rule else ""
            raise ExternalNotRegistered(f"{where}external predicate {name}/{len(args)} is not registered")
        ground = tuple(_resolve(a, subst, c, rule).name for a in args)
        if fn(ground, ctx.original_input, ctx.ontology):
            yield subst
        return
    raise ValueError(f"unknown condition kind {c.kind!r}")


def evaluate_condition(c: Condition, subst: Mapping[str, Term], ctx: TransferContext, side: str = SOURCE) -> bool:
    """Truth of a single condition; never consumes anything."""
    return next(_solutions(c, subst, ctx, side), None) is not None


def conditions_hold(conds: Sequence[Condition], subst: Mapping[str, Term], ctx: TransferContext,
                    side: str = SOURCE, rule: Optional[CompiledRule] = None) -> Optional[Mapping[str, Term]]:
    """Conjunction of *conds*, left to right, backtracking over pattern bindings.

    Returns the first extended substitution under which all hold, else None.
    The empty list holds vacuously.
    """

    def search(k: int, s: Mapping[str, Term]) -> Optional[Mapping[str, Term]]:
        if k == len(conds):
            return s
        for s2 in _solutions(conds[k], s, ctx, side, rule):
            found = search(k + 1, s2)
            if found is not None:
                return found
        return None

    return search(0, subst)


# -- derivation ---------------------------------------------------------------------------

def _matches(ctx: TransferContext, pos: int) -> Iterator[Application]:
    """Applicable (match, conditions-hold) pairs of one rule against the working set."""
    rule = ctx.base.rules[pos]
    for subst, positions in match_buckets(rule.sl, ctx.buckets, ctx.used, {}):
        if (pos, positions) in ctx.excluded:
            continue
        full = conditions_hold(rule.src_conds, subst, ctx, SOURCE, rule)
        if full is None:
            if (pos, positions) not in ctx._blocked:
                ctx._blocked.add((pos, positions))
                ctx.trace.append(TraceEvent(RULE_BLOCKED, rule.provenance, subst))
            continue
        yield Application(pos, rule, full, positions, tuple(ctx.conds[i] for i in positions))


def next_application(ctx: TransferContext, base: Optional[RuleBase] = None) -> Optional[Application]:
    """The most specific applicable (rule, match), or None.

    Rules that have no applicable match are skipped for good: the working set
    only shrinks and source conditions look at the unchanging original input.
    """
    while ctx._cursor < len(ctx._candidates):
        app = next(_matches(ctx, ctx._candidates[ctx._cursor]), None)
        if app is not None:
            return app
        ctx._cursor += 1
    return None


def apply(ctx: TransferContext, app: Application) -> tuple:
    ctx.used.update(app.positions)
    produced, full = instantiate(app.rule.tl, app.subst, ctx.fresh)
    ctx.output.extend(produced)
    ctx.applications.append(app)
    if app.rule.tgt_conds:
        ctx.pending_tgt_conds.append((app, full))
    ctx.trace.append(TraceEvent(RULE_APPLIED, app.rule.provenance, app.subst, app.consumed, produced))
    return produced


def _finish(ctx: TransferContext) -> Vit:
    for i, c in enumerate(ctx.conds):
        if i not in ctx.used:
            ctx.output.append(c)
            ctx.trace.append(TraceEvent(METARULE_COPY, produced=(c,)))
    out = canonical(ctx.output)
    names = {t.name for c in out for t in c.terms()}
    sorts = {m: s for m, s in ctx.original_input.sorts.items() if m in names}
    ctx.output_vit = Vit(ctx.base.target, out, sorts)
    ctx._output_buckets = bucket(ctx.output_vit.conds)
    return ctx.output_vit


def _show(c: Condition, subst: Mapping[str, Term]) -> str:
    def r(t: Term) -> Term:
        return subst.get(t.name, t) if t.kind == VAR else t

    if c.kind == PATTERN:
        p = c.payload
        return str(LabeledCondition(r(p.label), p.predicate, tuple(r(a) for a in p.args), p.class_flag))
    if c.kind == EXTERNAL:
        return str(Condition(EXTERNAL, (c.payload[0], tuple(r(a) for a in c.payload[1]))))
    return str(Condition(c.kind, (r(c.payload[0]), c.payload[1])))


def _validate(ctx: TransferContext) -> list:
    """Check queued target conditions against the finished output; return failing application keys."""
    failed = []
    for app, full in ctx.pending_tgt_conds:
        conds = app.rule.tgt_conds
        solution = conditions_hold(conds, full, ctx, TARGET, app.rule)
        if solution is not None:
            for c in conds:
                ctx.trace.append(TraceEvent(TGT_COND_CHECKED, app.rule.provenance,
                                            condition=_show(c, solution), verdict=True))
            continue
        # Report the conditions in order up to the first one that fails on the greedy path.
        s = full
        for c in conds:
            found = next(_solutions(c, s, ctx, TARGET, app.rule), None)
            ctx.trace.append(TraceEvent(TGT_COND_CHECKED, app.rule.provenance,
                                        condition=_show(c, found or s), verdict=found is not None))
            if found is None:
                break
            s = found
        failed.append(app.key)
    return failed


@dataclass
class TransferResult:
    output: Vit
    trace: List[TraceEvent]
    applications: List[Application]
    rounds: int = 1


def run_transfer(vit: Vit, base: RuleBase, externals: Optional[ExternalRegistry] = None,
                 use_index: bool = True) -> TransferResult:
    """Transfer with full bookkeeping (trace, applications)."""
    if vit.lang != base.source:
        raise TransferError(f"input language {vit.lang!r} does not match rule base source {base.source!r}")
    excluded: frozenset = frozenset()
    for rounds in range(1, MAX_ROUNDS + 1):
        ctx = TransferContext(vit, base, externals, excluded, use_index)
        while True:
            app = next_application(ctx)
            if app is None:
                break
            apply(ctx, app)
        out = _finish(ctx)
        failed = _validate(ctx)
        if not failed:
            return TransferResult(out, ctx.trace, ctx.applications, rounds)
        excluded = excluded | frozenset(failed)
    checks = [e.condition for e in ctx.trace if e.kind == TGT_COND_CHECKED and not e.verdict]
    raise TransferError(f"no consistent derivation after {MAX_ROUNDS} rounds; failing target "
                        f"conditions: {', '.join(checks)}")


def transfer(vit: Vit, base: RuleBase, externals: Optional[ExternalRegistry] = None,
             use_index: bool = True) -> Vit:
    return run_transfer(vit, base, externals, use_index).output


# -- alternatives over specificity ties ---------------------------------------------------------

def transfer_all(vit: Vit, base: RuleBase, limit: int = 10, externals: Optional[ExternalRegistry] = None,
                 max_states: int = 100_000) -> List[Vit]:
    """Up to *limit* pairwise non-alpha-equivalent translations.

    Branching happens only at ties: applicable (rule, match) pairs whose
    rules share cardinality, condition count and instantiation with the
    greedy choice.  The first result is always :func:`transfer`'s output.
    """
    results = [transfer(vit, base, externals)]
    if limit <= 1:
        return results
    seen_states: set = set()

    def leaf(apps: Sequence[Application]) -> None:
        ctx = TransferContext(vit, base, externals)
        for app in apps:
            apply(ctx, app)
        out = _finish(ctx)
        if _validate(ctx):
            return
        if not any(vit_alpha_equal(out, r) for r in results):
            results.append(out)

    def explore(apps: List[Application], used: frozenset, cursor: int) -> None:
        if len(results) >= limit or len(seen_states) >= max_states:
            return
        ctx = TransferContext(vit, base, externals)
        ctx.used = set(used)
        ctx._cursor = cursor
        first = next_application(ctx)
        if first is None:
            leaf(apps)
            return
        prefix = first.rule.specificity.prefix
        group = []
        k = ctx._cursor
        while k < len(ctx._candidates):
            pos = ctx._candidates[k]
            if base.rules[pos].specificity.prefix != prefix:
                break
            group.extend(_matches(ctx, pos))
            k += 1
        for app in group:
            state = frozenset(a.key for a in apps) | {app.key}
            if state in seen_states:
                continue
            seen_states.add(state)
            explore(apps + [app], used | set(app.positions), ctx._cursor)
            if len(results) >= limit:
                return

    explore([], frozenset(), 0)
    return results[:limit]
