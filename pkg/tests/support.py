"""Shared fixture loaders for the test suite."""

from __future__ import annotations

from pathlib import Path

from semtransfer.compiler import compile_rules
from semtransfer.syntax import parse_rule_file, parse_rule_files, parse_sorts, parse_vit

DATA = Path(__file__).parent / "data"

# The eight rules used in the worked examples: the core four, the two
# termin rules, the light verb rule and the head switching rule.
CORE_SET = ("core.rules", "termin.rules", "light_verb.rules", "head_switch.rules")
ALL_RULE_FILES = CORE_SET + ("passen_default.rules", "abbreviated.rules", "dative.rules",
                              "temp_loc.rules", "identity.rules")


def data(name: str) -> str:
    return str(DATA / name)


def read(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


def hierarchy(name: str = "domain.sorts"):
    return parse_sorts(read(name), name)


def load_base(*files, direction=("de", "en"), pair=None, sorts="domain.sorts"):
    rules, classes = parse_rule_files([data(f) for f in files])
    return compile_rules(rules, classes, direction, hierarchy(sorts) if sorts else None, pair)


def base_from_text(text: str, direction=("de", "en"), sorts_text: str = ""):
    rules, classes = parse_rule_file(text, "inline.rules")
    return compile_rules(rules, classes, direction, parse_sorts(sorts_text) if sorts_text else None)


def load_vit(name: str):
    return parse_vit(read(name), name)


def vit(conds: str, lang: str = "de", sorts: str = ""):
    """Build a Vit from a comma separated condition list."""
    text = f"lang: {lang}\nconds:\n  {conds}\n"
    if sorts:
        text += "sorts:\n" + "".join(f"  {s.strip()}\n" for s in sorts.split(","))
    return parse_vit(text)


def random_case(seed: int, max_rules: int = 15, max_conds: int = 10):
    """(base, vit) for a seeded random instance; see :mod:`semtransfer.generators`."""
    from semtransfer.generators import random_instance

    rules, classes, v, h = random_instance(seed, max_rules=max_rules, max_conds=max_conds).parsed()
    return compile_rules(rules, classes, ("de", "en"), h), v
