"""Readers and writers for rule files, Vit files and sort-hierarchy files.

Rule file grammar (whitespace-insensitive, ``%`` comments)::

    file      := (rule | classdef)*
    rule      := condset (',' condlist)? op condset (',' condlist)? '.'
    op        := '<->' | '->' | '<-'
    condset   := '[' cond (',' cond)* ']' | '[]'
    condlist  := '[' filter (',' filter)* ']'
    cond      := (term ':')? ident ('(' term (',' term)* ')')?
    filter    := cond | 'sort' '(' term ')' ('=<' | '=<~') ident
               | ident ('(' term (',' term)* ')')?
    classdef  := 'type' '(' ident ',' ident ',' '[' ident (',' ident)* ']' ')' '.'

Inside a condition list a labeled condition is a pattern test against the
input, ``sort(X) =< s`` / ``sort(X) =<~ s`` are sort tests and any other
unlabeled ``name(args)`` is a call to an external predicate.  Inside the
semantic sets the label may be omitted; an anonymous label variable is
inserted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import RuleSyntaxError, RuleValidationError, SortHierarchyError, VitFormatError
from .terms import ANON_PREFIX, VAR, LabeledCondition, Term, Vit, term

BIDIRECTIONAL = "<->"
FORWARD = "->"
BACKWARD = "<-"

PATTERN = "pattern"
SORT_LEQ = "sort-leq"
SORT_NOT_LEQ = "sort-not-leq"
EXTERNAL = "external"

_SORT_OPS = {"=<": SORT_LEQ, "=<~": SORT_NOT_LEQ}


@dataclass(frozen=True)
class Provenance:
    file: str
    line: int
    ordinal: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}"


@dataclass(frozen=True)
class Condition:
    """A non-consuming filter attached to one side of a rule.

    ``payload`` is a LabeledCondition for patterns, ``(term, sort)`` for sort
    tests and ``(name, args)`` for external calls.
    """

    kind: str
    payload: object

    def variables(self) -> Iterator[str]:
        if self.kind == PATTERN:
            yield from self.payload.variables()
        elif self.kind == EXTERNAL:
            yield from (a.name for a in self.payload[1] if a.kind == VAR)
        elif self.payload[0].kind == VAR:
            yield self.payload[0].name

    def __str__(self) -> str:
        if self.kind == PATTERN:
            return str(self.payload)
        if self.kind == EXTERNAL:
            name, args = self.payload
            return f"{name}({','.join(str(a) for a in args)})" if args else name
        op = "=<" if self.kind == SORT_LEQ else "=<~"
        return f"sort({self.payload[0]}){op}{self.payload[1]}"


@dataclass(frozen=True)
class TransferRule:
    sl: tuple
    op: str
    tl: tuple
    sl_conds: tuple = ()
    tl_conds: tuple = ()
    provenance: Provenance = Provenance("<string>", 0, 0)

    def variables(self) -> set:
        names = set()
        for c in self.sl + self.tl:
            names.update(c.variables())
        for c in self.sl_conds + self.tl_conds:
            names.update(c.variables())
        return names


@dataclass(frozen=True)
class ClassDef:
    lang: str
    name: str
    members: tuple
    provenance: Optional[Provenance] = field(default=None, compare=False)


# -- lexer ------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>%[^\n]*)
  | (?P<op><->|->|<-|=<~|=<)
  | (?P<punct>[\[\](),:.#=])
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "<string>") -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", source, line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.toks = tokenize(text, source)
        self.i = 0
        self._anon = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None) -> RuleSyntaxError:
        tok = tok or self.tok
        found = tok.text or "end of input"
        return RuleSyntaxError(f"{msg}, found {found!r}", self.source, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "punct")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error("expected a lowercase identifier")
        t = self.tok
        self.i += 1
        return t.text

    def anon(self) -> Term:
        self._anon += 1
        return Term(VAR, f"{ANON_PREFIX}{self._anon}")

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return self.anon() if t.text == "_" else Term(VAR, t.text)
        if t.kind == "ident":
            self.i += 1
            return term(t.text)
        raise self.error("expected a term")

    def args(self) -> tuple:
        if not self.at("("):
            return ()
        self.expect("(")
        out = [self.term()]
        while self.at(","):
            self.i += 1
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def _labeled(self) -> bool:
        return self.tok.kind in ("var", "ident") and self.peek().text == ":"

    def cond(self) -> LabeledCondition:
        if self._labeled():
            label = self.term()
            self.expect(":")
        else:
            label = self.anon()
        flag = False
        if self.at("#"):
            self.i += 1
            flag = True
        pred = self.ident()
        return LabeledCondition(label, pred, self.args(), flag)

    def condset(self) -> tuple:
        self.expect("[")
        items = []
        if not self.at("]"):
            items.append(self.cond())
            while self.at(","):
                self.i += 1
                items.append(self.cond())
        self.expect("]")
        return tuple(items)

    def filter(self) -> Condition:
        if self._labeled():
            return Condition(PATTERN, self.cond())
        if self.tok.text == "sort" and self.tok.kind == "ident" and self.peek().text == "(":
            save = self.i
            self.i += 1
            self.expect("(")
            subject = self.term()
            self.expect(")")
            if self.tok.kind == "op" and self.tok.text in _SORT_OPS:
                kind = _SORT_OPS[self.tok.text]
                self.i += 1
                return Condition(kind, (subject, self.ident()))
            self.i = save
        name = self.ident()
        return Condition(EXTERNAL, (name, self.args()))

    def condlist(self) -> tuple:
        self.expect("[")
        items = [self.filter()]
        while self.at(","):
            self.i += 1
            items.append(self.filter())
        self.expect("]")
        return tuple(items)

    def rule(self, ordinal: int) -> TransferRule:
        start = self.tok
        self._anon = 0
        sl = self.condset()
        sl_conds: tuple = ()
        if self.at(","):
            self.i += 1
            sl_conds = self.condlist()
        if self.tok.kind != "op" or self.tok.text not in (BIDIRECTIONAL, FORWARD, BACKWARD):
            raise self.error("expected one of '<->', '->', '<-'")
        op = self.tok.text
        self.i += 1
        tl = self.condset()
        tl_conds: tuple = ()
        if self.at(","):
            self.i += 1
            tl_conds = self.condlist()
        self.expect(".")
        if not sl:
            raise RuleValidationError("empty source set", self.source, start.line)
        return TransferRule(sl, op, tl, sl_conds, tl_conds, Provenance(self.source, start.line, ordinal))

    def classdef(self) -> ClassDef:
        start = self.tok
        self.i += 1
        self.expect("(")
        lang = self.ident()
        self.expect(",")
        name = self.ident()
        self.expect(",")
        self.expect("[")
        members = [self.ident()]
        while self.at(","):
            self.i += 1
            members.append(self.ident())
        self.expect("]")
        self.expect(")")
        self.expect(".")
        if len(set(members)) != len(members):
            raise RuleValidationError(f"class {name} lists a member twice", self.source, start.line)
        return ClassDef(lang, name, tuple(members), Provenance(self.source, start.line, 0))


def _check_arities(rules: Sequence[TransferRule], source: str) -> None:
    """A predicate keeps one arity per rule side across the whole file."""
    seen: dict = {}
    for r in rules:
        sides = (("source", r.sl + tuple(c.payload for c in r.sl_conds if c.kind == PATTERN)),
                 ("target", r.tl + tuple(c.payload for c in r.tl_conds if c.kind == PATTERN)))
        for side, conds in sides:
            for c in conds:
                prev = seen.setdefault((side, c.predicate), (c.arity, r.provenance.line))
                if prev[0] != c.arity:
                    raise RuleValidationError(
                        f"{c.predicate} used with arity {c.arity} on the {side} side, "
                        f"but with arity {prev[0]} at line {prev[1]}", source, r.provenance.line)


def parse_rule_file(text: str, source: str = "<string>", first_ordinal: int = 0
                    ) -> Tuple[List[TransferRule], List[ClassDef]]:
    """Parse rule text into rules (in file order, numbered from *first_ordinal*) and class definitions."""
    p = _Parser(text, source)
    rules: List[TransferRule] = []
    classes: List[ClassDef] = []
    while p.tok.kind != "eof":
        if p.tok.kind == "ident" and p.tok.text == "type":
            cd = p.classdef()
            if any((c.lang, c.name) == (cd.lang, cd.name) for c in classes):
                raise RuleValidationError(f"duplicate class definition {cd.lang}:{cd.name}",
                                          source, cd.provenance.line)
            classes.append(cd)
        elif p.at("["):
            rules.append(p.rule(first_ordinal + len(rules)))
        else:
            raise p.error("expected a rule or a class definition")
    _check_arities(rules, source)
    return rules, classes


def parse_rule_files(paths: Sequence[str]) -> Tuple[List[TransferRule], List[ClassDef]]:
    """Concatenate several rule files; ordinals run on across files."""
    rules: List[TransferRule] = []
    classes: List[ClassDef] = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        r, c = parse_rule_file(text, source=path, first_ordinal=len(rules))
        for cd in c:
            if any((x.lang, x.name) == (cd.lang, cd.name) for x in classes):
                raise RuleValidationError(f"duplicate class definition {cd.lang}:{cd.name}",
                                          path, cd.provenance.line)
        rules.extend(r)
        classes.extend(c)
    _check_arities(rules, "<rules>")
    return rules, classes


def _sorted_set(conds: Sequence[LabeledCondition]) -> tuple:
    return tuple(sorted(conds, key=lambda c: c.sort_key))


def format_set(conds: Sequence[LabeledCondition]) -> str:
    return "[" + ", ".join(str(c) for c in _sorted_set(conds)) + "]"


def format_rule(rule: TransferRule) -> str:
    left = format_set(rule.sl)
    if rule.sl_conds:
        left += ", [" + ", ".join(str(c) for c in rule.sl_conds) + "]"
    right = format_set(rule.tl)
    if rule.tl_conds:
        right += ", [" + ", ".join(str(c) for c in rule.tl_conds) + "]"
    return f"{left} {rule.op} {right}."


def format_classdef(cd: ClassDef) -> str:
    return f"type({cd.lang}, {cd.name}, [{', '.join(cd.members)}])."


def format_rule_file(rules: Sequence[TransferRule], classes: Sequence[ClassDef] = ()) -> str:
    lines = [format_classdef(c) for c in classes] + [format_rule(r) for r in rules]
    return "".join(line + "\n" for line in lines)


# -- Vit files ----------------------------------------------------------------------

# Section headers are digit-free words followed by ':' and whitespace or end
# of line; condition lines start with a label constant such as ``l1:``.
_SECTION_RE = re.compile(r"([A-Za-z_]+)\s*:(?:\s+(.*))?\Z")
_VIT_SECTIONS = ("lang", "conds", "sorts")


def parse_vit(text: str, source: str = "<string>") -> Vit:
    """Parse a Vit file: ``lang:``, ``conds:`` and optional ``sorts:`` sections.

    Condition lines may hold several comma-separated conditions and may be
    wrapped in brackets, so a bracketed list can be pasted as is.
    """
    lang = None
    section = None
    conds: list = []
    sorts: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            if m.group(1) not in _VIT_SECTIONS:
                raise VitFormatError(f"{source}:{lineno}: unknown section {m.group(1)!r}")
            section = m.group(1)
            line = (m.group(2) or "").strip()
            if section == "lang":
                if not line:
                    raise VitFormatError(f"{source}:{lineno}: missing language tag")
                lang = line
                continue
            if not line:
                continue
        if section == "conds":
            conds.extend(_vit_conds(line, source, lineno))
        elif section == "sorts":
            for item in filter(None, (x.strip() for x in line.split(","))):
                marker, eq, sort = (s.strip() for s in item.partition("="))
                if not eq or not marker or not sort:
                    raise VitFormatError(f"{source}:{lineno}: expected marker=sort, got {item!r}")
                if term(marker).kind == VAR:
                    raise VitFormatError(f"{source}:{lineno}: variable {marker} in sorts")
                if marker in sorts:
                    raise VitFormatError(f"{source}:{lineno}: two sorts for {marker}")
                sorts[marker] = sort
        else:
            raise VitFormatError(f"{source}:{lineno}: content outside any section: {line!r}")
    if lang is None:
        raise VitFormatError(f"{source}: missing 'lang:' section")
    if len(set(conds)) != len(conds):
        dup = next(c for c in conds if conds.count(c) > 1)
        raise VitFormatError(f"{source}: duplicate condition {dup}")
    return Vit(lang, tuple(conds), sorts)


def _vit_conds(line: str, source: str, lineno: int) -> list:
    p = _Parser(line.strip().strip("[]").strip().rstrip(","), source)
    for t in p.toks:
        t.line = lineno
    out = []
    while p.tok.kind != "eof":
        if not p._labeled():
            raise p.error("expected label:predicate(...)")
        c = p.cond()
        if not c.is_ground():
            raise VitFormatError(f"{source}:{lineno}: variable in Vit condition {c}; skolemize first")
        out.append(c)
        if p.at(","):
            p.i += 1
        elif p.tok.kind != "eof":
            raise p.error("expected ','")
    return out


def format_vit(vit: Vit) -> str:
    lines = [f"lang: {vit.lang}", "conds:"]
    lines += [f"  {c}" for c in vit.conds]
    if vit.sorts:
        lines.append("sorts:")
        lines += [f"  {m}={s}" for m, s in vit.sorts.items()]
    return "\n".join(lines) + "\n"


VIT_SEPARATOR = "---"


def parse_vits(text: str, source: str = "<string>") -> List[Vit]:
    """Parse a stream of Vit documents separated by ``---`` lines."""
    docs, cur = [], []
    for line in text.splitlines():
        if line.strip() == VIT_SEPARATOR:
            docs.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    docs.append("\n".join(cur))
    return [parse_vit(d, source) for d in docs if d.strip()]


def format_vits(vits: Sequence[Vit]) -> str:
    return (VIT_SEPARATOR + "\n").join(format_vit(v) for v in vits)


# -- sorts files ----------------------------------------------------------------------

def parse_sort_edges(text: str, source: str = "<string>") -> List[Tuple[str, str]]:
    """Read ``isa(child,parent).`` statements in file order."""
    p = _Parser(text, source)
    edges: List[Tuple[str, str]] = []
    while p.tok.kind != "eof":
        start = p.tok
        if p.ident() != "isa":
            raise p.error("expected 'isa'", start)
        p.expect("(")
        child = p.ident()
        p.expect(",")
        parent = p.ident()
        p.expect(")")
        p.expect(".")
        if (child, parent) in edges:
            raise SortHierarchyError(f"{source}:{start.line}: duplicate edge isa({child},{parent})")
        edges.append((child, parent))
    return edges


def parse_sorts(text: str, source: str = "<string>"):
    """Parse a sorts file into a :class:`~semtransfer.sorts.SortHierarchy`."""
    from .sorts import SortHierarchy

    return SortHierarchy.from_edges(parse_sort_edges(text, source))


def format_sorts(hierarchy) -> str:
    return "".join(f"isa({c},{p}).\n" for c, p in hierarchy.declared_edges)
