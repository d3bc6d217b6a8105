"""Batched inference-time benchmark.

Measures only the tag-predict / decode / apply work per batch: the corpus
is tokenized and the backend constructed before any clock starts, one
warmup pass per row is excluded, and a row is reported for every iteration
cap from 1 up to the configured maximum.  The clock is injectable so tests
can verify what falls inside the timed region.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .apply import VerbLexicon
from .core import TagVocabulary, TokenSeq
from .engine import InferenceConfig, simplify_batch
from .tagger import TaggerBackend


@dataclass(frozen=True)
class BenchRow:
    iterations: int
    mean_seconds: float
    median_seconds: float
    run_means: tuple[float, ...]
    mean_iterations_executed: float


@dataclass(frozen=True)
class BenchReport:
    batch_size: int
    runs: int
    rows: tuple[BenchRow, ...]

    def to_tsv(self) -> str:
        lines = ["iterations\tmean_s\tmedian_s\tmean_iters_executed\trun_means"]
        for row in self.rows:
            runs = ",".join(f"{m:.6f}" for m in row.run_means)
            lines.append(
                f"{row.iterations}\t{row.mean_seconds:.6f}\t{row.median_seconds:.6f}"
                f"\t{row.mean_iterations_executed:.3f}\t{runs}"
            )
        return "\n".join(lines) + "\n"

    def pretty(self) -> str:
        lines = [f"batch_size={self.batch_size} runs={self.runs}",
                 f"{'iterations':>10}  {'mean (s)':>10}  {'median (s)':>10}  {'iters run':>9}"]
        for row in self.rows:
            lines.append(
                f"{row.iterations:>10}  {row.mean_seconds:>10.4f}"
                f"  {row.median_seconds:>10.4f}  {row.mean_iterations_executed:>9.2f}"
            )
        return "\n".join(lines)


def _batches(corpus: Sequence[TokenSeq], batch_size: int) -> list[list[TokenSeq]]:
    return [list(corpus[i : i + batch_size]) for i in range(0, len(corpus), batch_size)]


def bench(
    corpus: Sequence[TokenSeq],
    backend: TaggerBackend,
    vocab: TagVocabulary,
    cfg: InferenceConfig,
    batch_size: int,
    runs: int,
    parallelism: int = 1,
    lexicon: VerbLexicon | None = None,
    clock: Callable[[], float] = time.perf_counter,
) -> BenchReport:
    """Time simplify_batch per batch for every iteration cap up to the configured one."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    if not corpus:
        raise ValueError("bench needs a non-empty corpus")

    batches = _batches(corpus, batch_size)
    rows = []
    for iterations in range(1, cfg.max_iterations + 1):
        row_cfg = replace(cfg, max_iterations=iterations)
        simplify_batch(batches[0], backend, vocab, row_cfg, parallelism, lexicon)  # warmup
        run_means = []
        all_times = []
        executed: list[int] = []
        for _ in range(runs):
            batch_times = []
            for batch in batches:
                start = clock()
                results = simplify_batch(batch, backend, vocab, row_cfg, parallelism, lexicon)
                batch_times.append(clock() - start)
                executed.extend(
                    len(item.trace.steps) for item in results if item.trace is not None
                )
            run_means.append(sum(batch_times) / len(batch_times))
            all_times.extend(batch_times)
        rows.append(
            BenchRow(
                iterations=iterations,
                mean_seconds=sum(all_times) / len(all_times),
                median_seconds=statistics.median(all_times),
                run_means=tuple(run_means),
                mean_iterations_executed=sum(executed) / len(executed) if executed else 0.0,
            )
        )
    return BenchReport(batch_size=batch_size, runs=runs, rows=tuple(rows))
