"""Latency benchmark at the scale of a production rule base."""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

from .compiler import compile_rules
from .engine import run_transfer, transfer
from .generators import SYNTHETIC_SORTS, inputs_from_rules, synthetic_inputs, synthetic_rules
from .syntax import parse_rule_file, parse_rule_files, parse_sorts, parse_vit

MIN_RUNS = 100
WARMUP = 20
N_INPUTS = 25


@dataclass
class BenchReport:
    rule_count: int
    compiled_rules: int
    input_size: int
    runs: int
    seed: int
    mean_ms: float
    median_ms: float
    p95_ms: float
    bypass_mean_ms: float
    retrieval_index_us: float
    retrieval_scan_us: float
    min_applications: int
    compile_ms: float
    total_s: float

    @property
    def retrieval_speedup(self) -> float:
        return self.retrieval_scan_us / self.retrieval_index_us if self.retrieval_index_us else float("inf")

    def as_text(self) -> str:
        return (
            f"rules: {self.rule_count} ({self.compiled_rules} compiled), input size: {self.input_size}, "
            f"runs: {self.runs}, seed: {self.seed}\n"
            f"transfer latency: mean {self.mean_ms:.3f} ms, median {self.median_ms:.3f} ms, "
            f"p95 {self.p95_ms:.3f} ms\n"
            f"without index: mean {self.bypass_mean_ms:.3f} ms\n"
            f"candidate retrieval: index {self.retrieval_index_us:.1f} us, scan {self.retrieval_scan_us:.1f} us "
            f"({self.retrieval_speedup:.1f}x)\n"
            f"rule applications per input: >= {self.min_applications}\n"
            f"compile: {self.compile_ms:.1f} ms, total: {self.total_s:.2f} s\n"
        )

    def as_key_values(self) -> str:
        fields = asdict(self)
        fields["retrieval_speedup"] = round(self.retrieval_speedup, 3)
        return "".join(f"{k}={round(v, 6) if isinstance(v, float) else v}\n" for k, v in fields.items())


def _timed(fn, runs: int, items: Sequence) -> List[float]:
    out = []
    for k in range(runs):
        x = items[k % len(items)]
        t0 = time.perf_counter()
        fn(x)
        out.append(time.perf_counter() - t0)
    return out


def run_bench(rule_count: Optional[int] = 1700, rules_files: Sequence[str] = (), input_size: int = 15,
              runs: int = 500, seed: int = 0, sorts_file: Optional[str] = None,
              direction: tuple = ("de", "en")) -> BenchReport:
    """Benchmark transfer on a synthetic (or given) rule base; all randomness comes from *seed*."""
    started = time.perf_counter()
    runs = max(runs, MIN_RUNS)
    if rules_files:
        rules, classes = parse_rule_files(rules_files)
        hierarchy = None
        if sorts_file:
            with open(sorts_file, encoding="utf-8") as fh:
                hierarchy = parse_sorts(fh.read(), sorts_file)
        vit_texts = inputs_from_rules(rules, input_size, N_INPUTS, seed, lang=direction[0])
        guaranteed = 0
    else:
        rs = synthetic_rules(rule_count or 0, seed)
        rules, classes = parse_rule_file(rs.text, source="synthetic.rules")
        hierarchy = parse_sorts(SYNTHETIC_SORTS)
        generated = synthetic_inputs(rs, input_size, N_INPUTS, seed)
        vit_texts = [t for t, _ in generated]
        guaranteed = min((a for _, a in generated), default=0)

    t0 = time.perf_counter()
    base = compile_rules(rules, classes, direction, hierarchy)
    compile_ms = (time.perf_counter() - t0) * 1000
    vits = [parse_vit(t) for t in vit_texts]
    if not rules_files:
        guaranteed = min(len(run_transfer(v, base).applications) for v in vits)

    for v in vits[:WARMUP]:
        transfer(v, base)
    lat = _timed(lambda v: transfer(v, base), runs, vits)
    bypass = _timed(lambda v: transfer(v, base, use_index=False), runs, vits)
    idx = _timed(lambda v: base.index.candidates(v.conds), runs, vits)
    scan = _timed(lambda v: base.index.scan(v.conds), runs, vits)

    ms = [x * 1000 for x in lat]
    return BenchReport(
        rule_count=len(rules),
        compiled_rules=len(base.rules),
        input_size=input_size,
        runs=runs,
        seed=seed,
        mean_ms=statistics.fmean(ms),
        median_ms=statistics.median(ms),
        p95_ms=statistics.quantiles(ms, n=20)[-1],
        bypass_mean_ms=statistics.fmean(bypass) * 1000,
        retrieval_index_us=statistics.fmean(idx) * 1e6,
        retrieval_scan_us=statistics.fmean(scan) * 1e6,
        min_applications=guaranteed,
        compile_ms=compile_ms,
        total_s=time.perf_counter() - started,
    )
