"""Iterative inference: decode predictions into tags, apply, repeat.

Decoding applies the inference tweaks: additive confidence biases on the
KEEP and DELETE entries of every distribution row (unnormalized, since only
the argmax is consumed) and a sentence-level gate that suppresses all edits
when no position reaches the minimum edit probability.  The loop stops
early once a pass is gated, chooses all KEEP, or leaves the sentence
unchanged; none of these early exits can change the final output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .apply import VerbLexicon, apply_tags
from .core import EditKind, KEEP_TAG, TagSeq, TagVocabulary, TokenSeq, serialize_tag
from .errors import ShapeMismatch
from .tagger import TagPrediction, TaggerBackend

KEEP_ID = 0
DELETE_ID = 1


@dataclass(frozen=True)
class InferenceConfig:
    """Inference tweak settings plus the iteration cap."""

    keep_bias: float = 0.0
    delete_bias: float = 0.0
    min_edit_prob: float = 0.0
    max_iterations: int = 5

    def __post_init__(self) -> None:
        if not 1 <= self.max_iterations <= 5:
            raise ValueError("max_iterations must be in 1..5")

    @classmethod
    def zero_tweaks(cls) -> "InferenceConfig":
        return cls(keep_bias=0.0, delete_bias=0.0, min_edit_prob=0.0, max_iterations=5)

    def to_text(self) -> str:
        return (
            f"keep_bias = {self.keep_bias!r}\n"
            f"delete_bias = {self.delete_bias!r}\n"
            f"min_edit_prob = {self.min_edit_prob!r}\n"
            f"max_iterations = {self.max_iterations}\n"
        )

    @classmethod
    def from_text(cls, text: str) -> "InferenceConfig":
        values: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line is not key = value: {raw!r}")
            values[key.strip()] = value.strip()
        unknown = set(values) - {"keep_bias", "delete_bias", "min_edit_prob", "max_iterations"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(
            keep_bias=float(values.get("keep_bias", 0.0)),
            delete_bias=float(values.get("delete_bias", 0.0)),
            min_edit_prob=float(values.get("min_edit_prob", 0.0)),
            max_iterations=int(values.get("max_iterations", 5)),
        )


def decode_step(
    pred: TagPrediction, vocab: TagVocabulary, cfg: InferenceConfig
) -> tuple[TagSeq, bool]:
    """Choose one tag per token, or gate the whole sentence to KEEP."""
    if pred.dist.shape[1] != len(vocab):
        raise ShapeMismatch(
            f"dist rows have {pred.dist.shape[1]} entries for vocabulary of {len(vocab)}"
        )
    if float(pred.detect.max()) < cfg.min_edit_prob:
        return (KEEP_TAG,) * len(pred), True
    scores = pred.dist.copy()
    scores[:, KEEP_ID] += cfg.keep_bias
    scores[:, DELETE_ID] += cfg.delete_bias
    ids = np.argmax(scores, axis=1)  # ties resolve to the lower tag id
    return tuple(vocab.tag_of(int(i)) for i in ids), False


@dataclass(frozen=True)
class TraceStep:
    input: TokenSeq
    tags: TagSeq
    gated: bool
    output: TokenSeq


@dataclass
class SimplifyTrace:
    """Per-iteration record of what the engine did to one sentence."""

    steps: list[TraceStep] = field(default_factory=list)

    @property
    def output(self) -> TokenSeq:
        return self.steps[-1].output

    def replay(self, lexicon: VerbLexicon | None = None) -> TokenSeq:
        """Re-apply the traced tag sequences; must reproduce the output."""
        seq = self.steps[0].input
        for step in self.steps:
            seq = apply_tags(seq, step.tags, lexicon)
        return seq

    def to_dict(self) -> dict:
        return {
            "steps": [
                {
                    "input": list(step.input.words()),
                    "tags": [serialize_tag(t) for t in step.tags],
                    "gated": step.gated,
                    "output": list(step.output.words()),
                }
                for step in self.steps
            ]
        }


def _all_keep(tags: TagSeq) -> bool:
    return all(tag.kind is EditKind.KEEP for tag in tags)


def simplify(
    seq: TokenSeq,
    backend: TaggerBackend,
    vocab: TagVocabulary,
    cfg: InferenceConfig,
    lexicon: VerbLexicon | None = None,
) -> tuple[TokenSeq, SimplifyTrace]:
    """Tag-and-edit one sentence for up to ``cfg.max_iterations`` passes."""
    trace = SimplifyTrace()
    for _ in range(cfg.max_iterations):
        pred = backend.predict_batch([seq])[0]
        tags, gated = decode_step(pred, vocab, cfg)
        out = seq if gated else apply_tags(seq, tags, lexicon)
        trace.steps.append(TraceStep(input=seq, tags=tags, gated=gated, output=out))
        if gated or _all_keep(tags) or out == seq:
            return out, trace
        seq = out
    return seq, trace


@dataclass
class BatchItem:
    """Result for one sentence of a batch: an output or an error."""

    output: TokenSeq | None = None
    trace: SimplifyTrace | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _predict_resilient(
    backend: TaggerBackend, seqs: list[TokenSeq]
) -> list[TagPrediction | Exception]:
    """Batch predict; on failure retry per sentence so errors attach per line."""
    try:
        return list(backend.predict_batch(seqs))
    except Exception:
        out: list[TagPrediction | Exception] = []
        for seq in seqs:
            try:
                out.append(backend.predict_batch([seq])[0])
            except Exception as exc:
                out.append(exc)
        return out


def _chunked(items: list, n_chunks: int) -> list[list]:
    size, extra = divmod(len(items), n_chunks)
    chunks, start = [], 0
    for k in range(n_chunks):
        end = start + size + (1 if k < extra else 0)
        chunks.append(items[start:end])
        start = end
    return [c for c in chunks if c]


def simplify_batch(
    seqs: Sequence[TokenSeq],
    backend: TaggerBackend,
    vocab: TagVocabulary,
    cfg: InferenceConfig,
    parallelism: int = 1,
    lexicon: VerbLexicon | None = None,
) -> list[BatchItem]:
    """Simplify a batch in lockstep iterations; output order is input order.

    Results are identical to running :func:`simplify` per sentence for any
    parallelism level; per-sentence backend failures are recorded instead
    of aborting the batch.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    results = [BatchItem() for _ in seqs]
    traces = [SimplifyTrace() for _ in seqs]
    states: list[TokenSeq] = list(seqs)
    active = list(range(len(seqs)))

    for _ in range(cfg.max_iterations):
        if not active:
            break
        batch = [states[i] for i in active]
        if parallelism == 1 or len(batch) == 1:
            preds = _predict_resilient(backend, batch)
        else:
            chunks = _chunked(batch, parallelism)
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                parts = list(pool.map(lambda c: _predict_resilient(backend, c), chunks))
            preds = [p for part in parts for p in part]
        still_active = []
        for idx, pred in zip(active, preds):
            if isinstance(pred, Exception):
                results[idx].error = f"{type(pred).__name__}: {pred}"
                continue
            try:
                tags, gated = decode_step(pred, vocab, cfg)
                out = states[idx] if gated else apply_tags(states[idx], tags, lexicon)
            except Exception as exc:
                results[idx].error = f"{type(exc).__name__}: {exc}"
                continue
            traces[idx].steps.append(
                TraceStep(input=states[idx], tags=tags, gated=gated, output=out)
            )
            finished = gated or _all_keep(tags) or out == states[idx]
            states[idx] = out
            if not finished:
                still_active.append(idx)
        active = still_active

    for i, item in enumerate(results):
        if item.error is None:
            item.output = states[i]
            item.trace = traces[i]
    return results
