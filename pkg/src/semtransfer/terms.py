"""Terms, labeled conditions and flat semantic sets.

A semantic representation is a flat set of labeled conditions such as
``l3:passen(i1)`` or ``l3:arg3(i1,i2)``.  Input to transfer is fully
skolemized: every label and marker is a constant.  Rules use variables
for labels and markers, and are applied by one-way matching, so a rule can
never bind anything inside the input.

Constant namespaces are fixed lexically:

* ``l<n>`` and ``t<n>`` are labels (``t`` is minted fresh during transfer),
* ``i<n>`` and ``j<n>`` are instances/markers (``j`` is minted fresh),
* any other lowercase symbol is an atom and never renamed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .errors import VitFormatError

VAR = "var"
CONST = "const"
ATOM = "atom"

LABEL_NS = "label"
INSTANCE_NS = "instance"

_SKOLEM_RE = re.compile(r"[litj][0-9]+\Z")
_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")
_IDENT_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")

# Names of parser-generated variables start with this; they never clash with
# user variables because the character cannot be written in rule text.
ANON_PREFIX = "?"


class Term(NamedTuple):
    kind: str
    name: str

    @property
    def is_var(self) -> bool:
        return self.kind == VAR

    @property
    def is_anonymous(self) -> bool:
        return self.name.startswith(ANON_PREFIX)

    def __str__(self) -> str:
        return "_" if self.is_anonymous else self.name

    def __repr__(self) -> str:
        return f"Term({self.kind}, {self.name!r})"


def term(name: str) -> Term:
    """Classify *name* lexically and build the corresponding term."""
    if _VAR_RE.match(name) or name.startswith(ANON_PREFIX):
        return Term(VAR, name)
    if _SKOLEM_RE.match(name):
        return Term(CONST, name)
    if _IDENT_RE.match(name):
        return Term(ATOM, name)
    raise ValueError(f"not a term: {name!r}")


def namespace(name: str) -> Optional[str]:
    """Skolem namespace of a constant name, None for atoms and variables."""
    if not _SKOLEM_RE.match(name):
        return None
    return LABEL_NS if name[0] in "lt" else INSTANCE_NS


class LabeledCondition(NamedTuple):
    label: Term
    predicate: str
    args: tuple = ()
    class_flag: bool = False

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple:
        """Index key; class-flagged conditions never share a key with lexical ones."""
        return (self.predicate, len(self.args), self.class_flag)

    @property
    def sort_key(self) -> tuple:
        return (self.predicate, len(self.args), self.label.name,
                tuple(a.name for a in self.args), self.class_flag)

    def terms(self) -> tuple:
        return (self.label,) + self.args

    def is_ground(self) -> bool:
        return not any(t.kind == VAR for t in self.terms())

    def variables(self) -> Iterator[str]:
        for t in self.terms():
            if t.kind == VAR:
                yield t.name

    def with_predicate(self, predicate: str, class_flag: Optional[bool] = None) -> "LabeledCondition":
        flag = self.class_flag if class_flag is None else class_flag
        return LabeledCondition(self.label, predicate, self.args, flag)

    def __str__(self) -> str:
        pred = "#" + self.predicate if self.class_flag else self.predicate
        head = pred if self.label.is_anonymous else f"{self.label}:{pred}"
        if not self.args:
            return head
        return f"{head}({','.join(str(a) for a in self.args)})"


def cond(label: str, predicate: str, *args: str, class_flag: bool = False) -> LabeledCondition:
    """Shorthand constructor: ``cond("l1", "echt", "l2")``."""
    return LabeledCondition(term(label), predicate, tuple(term(a) for a in args), class_flag)


def canonical(conds: Iterable[LabeledCondition]) -> tuple:
    """Deduplicate and sort into the canonical (predicate, arity, label, args) order."""
    return tuple(sorted(set(conds), key=lambda c: c.sort_key))


Substitution = Dict[str, Term]


def format_bindings(subst: Mapping[str, Term]) -> str:
    items = ", ".join(f"{k}={v}" for k, v in sorted(subst.items()) if not k.startswith(ANON_PREFIX))
    return "{" + items + "}"


class FreshNames:
    """Mints skolem constants that do not collide with any name in *taken*.

    Owned by a single transfer run; not thread-safe.
    """

    def __init__(self, taken: Iterable[str] = (), label_prefix: str = "t", instance_prefix: str = "j"):
        self._taken = set(taken)
        self._prefix = {LABEL_NS: label_prefix, INSTANCE_NS: instance_prefix}
        self._counter = {LABEL_NS: 0, INSTANCE_NS: 0}

    def reserve(self, names: Iterable[str]) -> None:
        self._taken.update(names)

    def new(self, ns: str) -> Term:
        while True:
            self._counter[ns] += 1
            name = f"{self._prefix[ns]}{self._counter[ns]}"
            if name not in self._taken:
                self._taken.add(name)
                return Term(CONST, name)

    def label(self) -> Term:
        return self.new(LABEL_NS)

    def instance(self) -> Term:
        return self.new(INSTANCE_NS)


# -- matching ---------------------------------------------------------------

def match_term(pattern: LabeledCondition, ground: LabeledCondition,
               subst: Mapping[str, Term]) -> Optional[Substitution]:
    """One-way match of *pattern* against the ground condition.

    Returns the extended substitution, or None on failure.  *subst* is never
    mutated.
    """
    if (pattern.predicate != ground.predicate or len(pattern.args) != len(ground.args)
            or pattern.class_flag != ground.class_flag):
        return None
    out = subst
    copied = False
    for p, g in zip(pattern.terms(), ground.terms()):
        if p.kind == VAR:
            bound = out.get(p.name)
            if bound is None:
                if not copied:
                    out = dict(out)
                    copied = True
                out[p.name] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def bucket(conds: Iterable[LabeledCondition]) -> Dict[tuple, list]:
    """Group conditions by index key, keeping (position, condition) pairs in order."""
    buckets: Dict[tuple, list] = {}
    for i, c in enumerate(conds):
        buckets.setdefault(c.key, []).append((i, c))
    return buckets


def match_buckets(patterns: Sequence[LabeledCondition], buckets: Mapping[tuple, list],
                  used: set, subst: Mapping[str, Term]) -> Iterator[tuple]:
    """Enumerate injective matches of *patterns* into bucketed input.

    Yields ``(substitution, positions)`` where positions are the input
    positions consumed, aligned with *patterns*.  Positions in *used* are
    skipped.  Solutions come in lexicographic order of positions.
    """
    n = len(patterns)
    if n == 0:
        yield dict(subst), ()
        return
    for p in patterns:
        if p.key not in buckets:
            return
    chosen: list = []

    def search(k: int, s: Mapping[str, Term]) -> Iterator[tuple]:
        pat = patterns[k]
        for i, g in buckets[pat.key]:
            if i in used or i in chosen:
                continue
            s2 = match_term(pat, g, s)
            if s2 is None:
                continue
            chosen.append(i)
            if k + 1 == n:
                yield s2, tuple(chosen)
            else:
                yield from search(k + 1, s2)
            chosen.pop()

    yield from search(0, subst)


def match_set(patterns: Sequence[LabeledCondition], ground: Iterable[LabeledCondition],
              subst: Optional[Mapping[str, Term]] = None) -> Iterator[tuple]:
    """Enumerate all injective matches of a pattern set into a ground set.

    Yields ``(substitution, consumed)`` with *consumed* the matched ground
    conditions in pattern order.  The ground set is put in canonical order
    first, so enumeration order does not depend on how it was given.

    >>> p = [LabeledCondition(term("L"), "echt", (term("A"),))]
    >>> [dict(s) for s, _ in match_set(p, [cond("l1", "echt", "l2")])]
    [{'L': Term(const, 'l1'), 'A': Term(const, 'l2')}]
    """
    ground = canonical(ground)
    for s, positions in match_buckets(list(patterns), bucket(ground), set(), subst or {}):
        yield s, tuple(ground[i] for i in positions)


# -- instantiation ------------------------------------------------------------

def label_variables(conds: Iterable[LabeledCondition]) -> set:
    return {c.label.name for c in conds if c.label.kind == VAR}


def instantiate(templates: Sequence[LabeledCondition], subst: Mapping[str, Term],
                fresh: FreshNames) -> tuple:
    """Like :func:`substitute` but also returns the substitution extended with fresh bindings."""
    full = dict(subst)
    in_label = label_variables(templates)

    def resolve(t: Term) -> Term:
        if t.kind != VAR:
            return t
        b = full.get(t.name)
        if b is None:
            b = fresh.label() if t.name in in_label else fresh.instance()
            full[t.name] = b
        return b

    out = []
    for c in templates:
        out.append(LabeledCondition(resolve(c.label), c.predicate,
                                    tuple(resolve(a) for a in c.args), c.class_flag))
    return canonical(out), full


def substitute(templates: Sequence[LabeledCondition], subst: Mapping[str, Term],
               fresh: FreshNames) -> tuple:
    """Ground *templates*: bound variables take their binding, unbound ones a fresh constant."""
    return instantiate(templates, subst, fresh)[0]


def constants(conds: Iterable[LabeledCondition]) -> set:
    return {t.name for c in conds for t in c.terms() if t.kind == CONST}


def skolemize(conds: Iterable[LabeledCondition]) -> tuple:
    """Replace every variable by a distinct fresh ``l``/``i`` constant.

    A variable that occurs in label position anywhere gets a label constant.
    """
    conds = canonical(conds)
    fresh = FreshNames(constants(conds), label_prefix="l", instance_prefix="i")
    return instantiate(conds, {}, fresh)[0]


# -- alpha-equivalence --------------------------------------------------------

def find_renaming(a: Sequence[LabeledCondition], b: Sequence[LabeledCondition],
                  renameable: Callable[[Term], bool],
                  accept: Optional[Callable[[dict], bool]] = None) -> Optional[dict]:
    """Search for a bijection over renameable terms mapping set *a* onto set *b*.

    Renameable terms map only to renameable terms of the same skolem
    namespace.  *accept* may veto a complete bijection (e.g. sort tables).
    """
    a = list(dict.fromkeys(a))
    b = list(dict.fromkeys(b))
    if len(a) != len(b):
        return None

    def shape(c: LabeledCondition) -> tuple:
        return (c.predicate, len(c.args), c.class_flag,
                tuple(None if renameable(t) else t for t in c.terms()))

    by_shape: Dict[tuple, list] = {}
    for c in b:
        by_shape.setdefault(shape(c), []).append(c)
    options = []
    for c in a:
        cands = by_shape.get(shape(c))
        if not cands:
            return None
        options.append((c, cands))
    if _count_shapes(a, shape) != {k: len(v) for k, v in by_shape.items()}:
        return None
    options.sort(key=lambda o: len(o[1]))

    fwd: dict = {}
    bwd: dict = {}
    taken: set = set()

    def bind(x: Term, y: Term, log: list) -> bool:
        if not renameable(x):
            return x == y
        if namespace(x.name) != namespace(y.name):
            return False
        fx = fwd.get(x)
        if fx is not None:
            return fx == y
        if y in bwd:
            return False
        fwd[x] = y
        bwd[y] = x
        log.append(x)
        return True

    def search(k: int) -> bool:
        if k == len(options):
            return accept is None or accept(fwd)
        c, cands = options[k]
        for d in cands:
            if d in taken:
                continue
            log: list = []
            if all(bind(x, y, log) for x, y in zip(c.terms(), d.terms())):
                taken.add(d)
                if search(k + 1):
                    return True
                taken.discard(d)
            for x in log:
                del bwd[fwd.pop(x)]
        return False

    return dict(fwd) if search(0) else None


def _count_shapes(conds: Iterable[LabeledCondition], shape: Callable) -> dict:
    counts: dict = {}
    for c in conds:
        counts[shape(c)] = counts.get(shape(c), 0) + 1
    return counts


def conds_alpha_equal(a: Iterable[LabeledCondition], b: Iterable[LabeledCondition]) -> bool:
    return find_renaming(list(a), list(b), lambda t: t.kind == CONST) is not None


# -- Vit ----------------------------------------------------------------------

@dataclass(frozen=True)
class Vit:
    """A language-tagged ground semantic set plus a marker->sort table."""

    lang: str
    conds: tuple = ()
    sorts: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        conds = canonical(self.conds)
        for c in conds:
            if not c.is_ground():
                raise VitFormatError(f"condition {c} is not ground")
        occurring = {t.name for c in conds for t in c.terms()}
        for marker in self.sorts:
            if marker not in occurring:
                raise VitFormatError(f"sort entry for {marker} which occurs in no condition")
        object.__setattr__(self, "conds", conds)
        object.__setattr__(self, "sorts", dict(sorted(self.sorts.items())))

    def __hash__(self) -> int:
        return hash((self.lang, self.conds, tuple(self.sorts.items())))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.conds) + "]"


def vit_alpha_equal(a: Vit, b: Vit) -> bool:
    """True iff *a* and *b* are equal up to a namespace-respecting renaming of skolem constants."""
    if a.lang != b.lang or len(a.conds) != len(b.conds) or len(a.sorts) != len(b.sorts):
        return False

    def sorts_agree(fwd: dict) -> bool:
        for marker, s in a.sorts.items():
            t = term(marker)
            image = fwd.get(t, t).name
            if b.sorts.get(image) != s:
                return False
        return True

    return find_renaming(a.conds, b.conds, lambda t: t.kind == CONST, sorts_agree) is not None
