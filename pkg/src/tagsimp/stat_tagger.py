"""A desk-scale trainable tagger: two linear heads over shared hashed features.

The model mirrors the two-head shape the engine expects from any real
tagger: a binary edit-detection head and a softmax edit-classification head
over the tag vocabulary, both reading the same sparse hashed context
features (token identity, lowercased form, a +/-2 token window, prefixes
and suffixes up to three characters, and a sentinel marker).  Feature
hashing is seed-stable; collisions are accepted.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable, Sequence

import numpy as np

from .align import extract_tags
from .apply import VerbLexicon
from .core import EditKind, TagVocabulary, TokenSeq
from .errors import EmptyCorpus
from .tagger import TagPrediction

DEFAULT_HASH_DIM = 2 ** 18
_PAD = "<pad>"
_MAGIC = b"tagsimp-stat-model v1\n"


def _hash_feature(name: str, seed: int, dim: int) -> int:
    digest = hashlib.blake2b(
        name.encode("utf-8"), digest_size=8, key=seed.to_bytes(8, "little")
    ).digest()
    return int.from_bytes(digest, "little") % dim


def token_features(seq: TokenSeq, position: int) -> list[str]:
    """Feature strings for one token position."""
    texts = [tok.text for tok in seq.tokens]
    text = texts[position]
    feats = [f"w={text}", f"lw={text.lower()}"]
    for offset in (-2, -1, 1, 2):
        j = position + offset
        ctx = texts[j] if 0 <= j < len(texts) else _PAD
        feats.append(f"w{offset:+d}={ctx}")
    for k in range(1, 4):
        if len(text) >= k:
            feats.append(f"pre{k}={text[:k]}")
            feats.append(f"suf{k}={text[-k:]}")
    if seq.tokens[position].is_start:
        feats.append("start")
    return feats


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _sigmoid(x: float) -> float:
    return 1.0 / (1.0 + np.exp(-x))


class StatTaggerModel:
    """Hashed-feature linear model with detection and classification heads."""

    def __init__(self, n_classes: int, hash_seed: int, dim: int = DEFAULT_HASH_DIM,
                 vocab_sha256: str = ""):
        self.n_classes = n_classes
        self.hash_seed = hash_seed
        self.dim = dim
        self.vocab_sha256 = vocab_sha256
        self.cls_weights = np.zeros((dim, n_classes), dtype=np.float64)
        self.cls_bias = np.zeros(n_classes, dtype=np.float64)
        self.det_weights = np.zeros(dim, dtype=np.float64)
        self.det_bias = 0.0
        self.epoch_losses: list[float] = []
        self._hash_cache: dict[str, int] = {}

    def _indices(self, seq: TokenSeq, position: int) -> np.ndarray:
        cache = self._hash_cache
        idxs = []
        for feat in token_features(seq, position):
            h = cache.get(feat)
            if h is None:
                h = _hash_feature(feat, self.hash_seed, self.dim)
                cache[feat] = h
            idxs.append(h)
        return np.asarray(idxs, dtype=np.intp)

    def predict_batch(self, seqs: Sequence[TokenSeq]) -> list[TagPrediction]:
        out = []
        for seq in seqs:
            dist = np.empty((len(seq), self.n_classes), dtype=np.float64)
            detect = np.empty(len(seq), dtype=np.float64)
            for i in range(len(seq)):
                idxs = self._indices(seq, i)
                dist[i] = _softmax(self.cls_weights[idxs].sum(axis=0) + self.cls_bias)
                detect[i] = _sigmoid(float(self.det_weights[idxs].sum()) + self.det_bias)
            out.append(TagPrediction(detect=detect, dist=dist))
        return out

    def save(self, path) -> None:
        meta = {
            "n_classes": self.n_classes,
            "hash_seed": self.hash_seed,
            "dim": self.dim,
            "vocab_sha256": self.vocab_sha256,
        }
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(json.dumps(meta, sort_keys=True).encode("utf-8") + b"\n")
            np.save(fh, self.cls_weights)
            np.save(fh, self.cls_bias)
            np.save(fh, self.det_weights)
            np.save(fh, np.float64(self.det_bias))

    @classmethod
    def load(cls, path) -> "StatTaggerModel":
        with open(path, "rb") as fh:
            magic = fh.readline()
            if magic != _MAGIC:
                raise ValueError(f"not a stat tagger model file: {magic!r}")
            meta = json.loads(fh.readline().decode("utf-8"))
            model = cls(
                n_classes=meta["n_classes"],
                hash_seed=meta["hash_seed"],
                dim=meta["dim"],
                vocab_sha256=meta.get("vocab_sha256", ""),
            )
            model.cls_weights = np.load(fh)
            model.cls_bias = np.load(fh)
            model.det_weights = np.load(fh)
            model.det_bias = float(np.load(fh))
        return model


def stat_train(
    corpus: Iterable[tuple[TokenSeq, TokenSeq]],
    vocab: TagVocabulary,
    epochs: int,
    learning_rate: float,
    seed: int,
    dim: int = DEFAULT_HASH_DIM,
    lexicon: VerbLexicon | None = None,
) -> StatTaggerModel:
    """Train both heads by SGD on cross-entropy; deterministic given the seed."""
    model = StatTaggerModel(
        n_classes=len(vocab), hash_seed=seed, dim=dim, vocab_sha256=vocab.sha256()
    )
    samples: list[tuple[np.ndarray, int, float]] = []
    for src, tgt in corpus:
        tags = extract_tags(src, tgt, vocab=vocab, lexicon=lexicon)
        for i, tag in enumerate(tags):
            idxs = model._indices(src, i)
            samples.append((idxs, vocab.id_of(tag), 0.0 if tag.kind is EditKind.KEEP else 1.0))
    if not samples:
        raise EmptyCorpus("stat_train needs a non-empty corpus")

    rng = np.random.default_rng(seed)
    order = np.arange(len(samples))
    for _ in range(epochs):
        rng.shuffle(order)
        total = 0.0
        for k in order:
            idxs, label, det_label = samples[k]
            probs = _softmax(model.cls_weights[idxs].sum(axis=0) + model.cls_bias)
            det_p = _sigmoid(float(model.det_weights[idxs].sum()) + model.det_bias)
            total += -np.log(max(probs[label], 1e-300))
            total += -np.log(max(det_p if det_label else 1.0 - det_p, 1e-300))

            grad = probs.copy()
            grad[label] -= 1.0
            np.add.at(model.cls_weights, idxs, -learning_rate * grad)
            model.cls_bias -= learning_rate * grad
            det_grad = det_p - det_label
            np.add.at(model.det_weights, idxs, -learning_rate * det_grad)
            model.det_bias -= learning_rate * det_grad
        model.epoch_losses.append(total / len(samples))
    return model
