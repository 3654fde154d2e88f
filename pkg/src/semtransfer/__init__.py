"""Semantic transfer: bidirectional rules over flat labeled semantics, compiled
into direction-specific indexed rule bases and applied most-specific-first."""

from .compiler import (CompiledRule, RuleBase, RuleIndex, SpecificityKey, build_index, compile_rules,
                       expand_classes, load_rulebase, orient, save_rulebase, specificity_key)
from .engine import (ExternalRegistry, TraceEvent, TransferContext, TransferResult, evaluate_condition,
                     format_trace, next_application, register_external, replay_trace, run_transfer,
                     transfer, transfer_all)
from .errors import (CompileError, ExternalNotRegistered, OracleLimitError, RuleSyntaxError,
                     RuleValidationError, SemTransferError, SortHierarchyError, TransferError,
                     UnknownSortError, VitFormatError)
from .oracle import oracle_candidates, oracle_transfer
from .sorts import SortHierarchy, sort_of, subsumes
from .syntax import (ClassDef, Condition, Provenance, TransferRule, format_rule, format_rule_file,
                     format_sorts, format_vit, parse_rule_file, parse_rule_files, parse_sorts, parse_vit)
from .terms import (FreshNames, LabeledCondition, Term, Vit, cond, match_set, match_term, skolemize,
                    substitute, term, vit_alpha_equal)

__version__ = "0.1.0"

__all__ = [
    "ClassDef",
    "CompileError",
    "CompiledRule",
    "Condition",
    "ExternalNotRegistered",
    "ExternalRegistry",
    "FreshNames",
    "LabeledCondition",
    "OracleLimitError",
    "Provenance",
    "RuleBase",
    "RuleIndex",
    "RuleSyntaxError",
    "RuleValidationError",
    "SemTransferError",
    "SortHierarchy",
    "SortHierarchyError",
    "SpecificityKey",
    "Term",
    "TraceEvent",
    "TransferContext",
    "TransferError",
    "TransferResult",
    "TransferRule",
    "UnknownSortError",
    "Vit",
    "VitFormatError",
    "build_index",
    "compile_rules",
    "cond",
    "evaluate_condition",
    "expand_classes",
    "format_rule",
    "format_rule_file",
    "format_sorts",
    "format_trace",
    "format_vit",
    "load_rulebase",
    "match_set",
    "match_term",
    "next_application",
    "oracle_candidates",
    "oracle_transfer",
    "orient",
    "parse_rule_file",
    "parse_rule_files",
    "parse_sorts",
    "parse_vit",
    "register_external",
    "replay_trace",
    "run_transfer",
    "save_rulebase",
    "skolemize",
    "sort_of",
    "specificity_key",
    "substitute",
    "subsumes",
    "term",
    "transfer",
    "transfer_all",
    "vit_alpha_equal",
]
