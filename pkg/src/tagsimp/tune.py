"""Search over inference-tweak settings maximizing development-set SARI.

Random search over the bias/threshold/iteration ranges, followed by two
coordinate-descent sweeps around the incumbent with halved steps.  Sample 0
is always the zero-tweak configuration, so the returned setting can never
score worse on the development set than running with no tweaks.  Candidate
evaluations inside a stage are independent; selection happens after the
stage, so evaluating them in parallel cannot change the result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from .apply import VerbLexicon
from .core import detokenize, tokenize
from .engine import InferenceConfig, simplify
from .errors import EmptyDevSet
from .metrics import EvalRecord, sari
from .tagger import TaggerBackend

KEEP_BIAS_RANGE = (-1.0, 0.5)
DELETE_BIAS_RANGE = (-1.0, 0.5)
MIN_EDIT_PROB_RANGE = (0.0, 0.5)
ITERATION_RANGE = (1, 5)

_BIAS_STEP = 0.25
_PROB_STEP = 0.1
_SWEEPS = 2


@dataclass(frozen=True)
class TuneEntry:
    sample_id: int
    config: InferenceConfig
    dev_sari: float


@dataclass(frozen=True)
class TuneResult:
    config: InferenceConfig
    dev_sari: float
    log: tuple[TuneEntry, ...]


def _clamp(value: float, bounds: tuple[float, float]) -> float:
    return min(max(value, bounds[0]), bounds[1])


def _dev_sari(
    dev: Sequence[tuple[str, tuple[str, ...]]],
    backend: TaggerBackend,
    vocab,
    cfg: InferenceConfig,
    lexicon: VerbLexicon | None,
) -> float:
    records = []
    for source, references in dev:
        output, _ = simplify(tokenize(source), backend, vocab, cfg, lexicon)
        records.append(EvalRecord(source, detokenize(output), tuple(references)))
    return sari(records).sari


def _better(a: TuneEntry, b: TuneEntry) -> bool:
    """True when `a` beats `b`: higher SARI, then fewer iterations, then larger gate."""
    if a.dev_sari != b.dev_sari:
        return a.dev_sari > b.dev_sari
    if a.config.max_iterations != b.config.max_iterations:
        return a.config.max_iterations < b.config.max_iterations
    return a.config.min_edit_prob > b.config.min_edit_prob


def tune(
    dev: Sequence[tuple[str, tuple[str, ...]]],
    backend: TaggerBackend,
    vocab,
    budget: int,
    seed: int,
    lexicon: VerbLexicon | None = None,
) -> TuneResult:
    """Return the best configuration found and its development SARI."""
    if not dev:
        raise EmptyDevSet("tune needs a non-empty development set")
    if budget < 1:
        raise ValueError("budget must be at least 1")

    rng = random.Random(seed)
    log: list[TuneEntry] = []

    def evaluate(cfg: InferenceConfig) -> TuneEntry:
        entry = TuneEntry(len(log), cfg, _dev_sari(dev, backend, vocab, cfg, lexicon))
        log.append(entry)
        return entry

    best = evaluate(InferenceConfig.zero_tweaks())
    for _ in range(budget - 1):
        cfg = InferenceConfig(
            keep_bias=rng.uniform(*KEEP_BIAS_RANGE),
            delete_bias=rng.uniform(*DELETE_BIAS_RANGE),
            min_edit_prob=rng.uniform(*MIN_EDIT_PROB_RANGE),
            max_iterations=rng.randint(*ITERATION_RANGE),
        )
        entry = evaluate(cfg)
        if _better(entry, best):
            best = entry

    bias_step, prob_step = _BIAS_STEP, _PROB_STEP
    for _ in range(_SWEEPS):
        base = best.config
        candidates: list[InferenceConfig] = []
        for delta in (-bias_step, bias_step):
            candidates.append(
                replace(base, keep_bias=_clamp(base.keep_bias + delta, KEEP_BIAS_RANGE))
            )
            candidates.append(
                replace(base, delete_bias=_clamp(base.delete_bias + delta, DELETE_BIAS_RANGE))
            )
        for delta in (-prob_step, prob_step):
            candidates.append(
                replace(
                    base,
                    min_edit_prob=_clamp(base.min_edit_prob + delta, MIN_EDIT_PROB_RANGE),
                )
            )
        for delta in (-1, 1):
            iters = base.max_iterations + delta
            if ITERATION_RANGE[0] <= iters <= ITERATION_RANGE[1]:
                candidates.append(replace(base, max_iterations=iters))
        entries = [evaluate(cfg) for cfg in candidates if cfg != base]
        for entry in entries:  # select only after the full sweep
            if _better(entry, best):
                best = entry
        bias_step /= 2
        prob_step /= 2

    return TuneResult(config=best.config, dev_sari=best.dev_sari, log=tuple(log))


def tune_log_tsv(result: TuneResult) -> str:
    lines = ["sample_id\tkeep_bias\tdelete_bias\tmin_edit_prob\tmax_iterations\tdev_sari"]
    for e in result.log:
        c = e.config
        lines.append(
            f"{e.sample_id}\t{c.keep_bias:.6f}\t{c.delete_bias:.6f}"
            f"\t{c.min_edit_prob:.6f}\t{c.max_iterations}\t{e.dev_sari:.6f}"
        )
    return "\n".join(lines) + "\n"
