"""Command-line interface: preprocess, build-vocab, train-stat, simplify,
evaluate, tune and bench.

Every subcommand is a thin adapter over the library; identical inputs via
the CLI or via library calls produce identical artifacts.  Exit codes:
0 ok, 1 usage, 2 data error, 3 backend/protocol error.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys

from .align import PairReader, build_vocab, filter_brackets
from .apply import VerbLexicon, default_lexicon
from .bench import bench as run_bench
from .core import TagVocabulary, detokenize, tokenize
from .engine import InferenceConfig, simplify, simplify_batch
from .errors import (
    InvariantViolation,
    PeerUnavailable,
    ProtocolError,
    ShapeMismatch,
    TagsimpError,
)
from .external import ExternalTaggerClient
from .metrics import evaluate, read_eval_tsv
from .stat_tagger import DEFAULT_HASH_DIM, StatTaggerModel, stat_train
from .tagger import CorpusOracleBackend, OracleBackend
from .tune import tune, tune_log_tsv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


def _read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def _load_lexicon(args) -> VerbLexicon:
    if getattr(args, "lexicon", None):
        return VerbLexicon.from_path(args.lexicon)
    return default_lexicon()


def _load_config(args) -> InferenceConfig:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = InferenceConfig.from_text(fh.read())
    else:
        cfg = InferenceConfig.zero_tweaks()
    overrides = {}
    if args.keep_bias is not None:
        overrides["keep_bias"] = args.keep_bias
    if args.delete_bias is not None:
        overrides["delete_bias"] = args.delete_bias
    if args.min_edit_prob is not None:
        overrides["min_edit_prob"] = args.min_edit_prob
    if args.max_iterations is not None:
        overrides["max_iterations"] = args.max_iterations
    if overrides:
        cfg = InferenceConfig(
            keep_bias=overrides.get("keep_bias", cfg.keep_bias),
            delete_bias=overrides.get("delete_bias", cfg.delete_bias),
            min_edit_prob=overrides.get("min_edit_prob", cfg.min_edit_prob),
            max_iterations=overrides.get("max_iterations", cfg.max_iterations),
        )
    return cfg


def _add_config_args(sub) -> None:
    sub.add_argument("--config", help="inference config file (key = value lines)")
    sub.add_argument("--keep-bias", type=float, dest="keep_bias")
    sub.add_argument("--delete-bias", type=float, dest="delete_bias")
    sub.add_argument("--min-edit-prob", type=float, dest="min_edit_prob")
    sub.add_argument("--max-iterations", type=int, dest="max_iterations")


def _add_backend_args(sub) -> None:
    sub.add_argument("--backend", required=True, choices=["oracle", "stat", "external"])
    sub.add_argument("--vocab", required=True, help="tag vocabulary file")
    sub.add_argument("--model", help="stat model file (backend=stat)")
    sub.add_argument("--references", help="reference sentences, one per line (backend=oracle)")
    sub.add_argument("--peer-cmd", help="peer command line (backend=external, stdio)")
    sub.add_argument("--peer-host", help="peer host (backend=external, TCP)")
    sub.add_argument("--peer-port", type=int, help="peer port (backend=external, TCP)")
    sub.add_argument("--lexicon", help="verb-form lexicon TSV (default: packaged)")


def _make_batch_backend(args, vocab, sources, lexicon):
    """Backend for whole-corpus commands; oracle pairs sources with references."""
    if args.backend == "stat":
        if not args.model:
            raise _Usage("--model is required with --backend stat")
        return StatTaggerModel.load(args.model)
    if args.backend == "external":
        if args.peer_cmd:
            return ExternalTaggerClient.from_command(shlex.split(args.peer_cmd), vocab)
        if args.peer_host and args.peer_port:
            return ExternalTaggerClient.from_tcp(args.peer_host, args.peer_port, vocab)
        raise _Usage("--peer-cmd or --peer-host/--peer-port required with --backend external")
    # oracle: targets from --references, or the sources themselves (identity)
    if args.references:
        targets = [tokenize(line) for line in _read_lines(args.references)]
        if len(targets) != len(sources):
            raise ValueError(
                f"{len(sources)} input sentences but {len(targets)} references"
            )
    else:
        targets = list(sources)
    return CorpusOracleBackend(list(zip(sources, targets)), vocab, lexicon)


class _Usage(Exception):
    pass


def _close_backend(backend) -> None:
    close = getattr(backend, "close", None)
    if close is not None:
        close()


def cmd_preprocess(args) -> int:
    skipped = 0
    with open(args.input, "r", encoding="utf-8") as src, \
            open(args.output, "w", encoding="utf-8") as dst:
        for raw in src:
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) > 2:
                skipped += 1
                continue
            normalized = []
            for field in fields:
                seq = tokenize(field)
                if args.filter_brackets:
                    seq = filter_brackets(seq)
                normalized.append(detokenize(seq))
            dst.write("\t".join(normalized) + "\n")
    if skipped:
        print(f"warning: skipped {skipped} lines with more than 2 fields", file=sys.stderr)
    return EXIT_OK


def cmd_build_vocab(args) -> int:
    reader = PairReader(args.corpus)
    lexicon = _load_lexicon(args)
    pairs = ((tokenize(src), tokenize(tgt)) for src, tgt in reader)
    vocab = build_vocab(pairs, capacity=args.capacity, lexicon=lexicon)
    vocab.save(args.output)
    if reader.skipped:
        print(f"warning: skipped {reader.skipped} malformed lines", file=sys.stderr)
    print(f"wrote {len(vocab)} tags to {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_train_stat(args) -> int:
    vocab = TagVocabulary.load(args.vocab)
    lexicon = _load_lexicon(args)
    reader = PairReader(args.corpus)
    pairs = [(tokenize(src), tokenize(tgt)) for src, tgt in reader]
    model = stat_train(
        pairs,
        vocab,
        epochs=args.epochs,
        learning_rate=args.lr,
        seed=args.seed,
        dim=args.hash_dim,
        lexicon=lexicon,
    )
    model.save(args.output)
    if reader.skipped:
        print(f"warning: skipped {reader.skipped} malformed lines", file=sys.stderr)
    losses = ", ".join(f"{loss:.4f}" for loss in model.epoch_losses)
    print(f"trained on {len(pairs)} pairs; epoch losses: {losses}", file=sys.stderr)
    return EXIT_OK


def cmd_simplify(args) -> int:
    vocab = TagVocabulary.load(args.vocab)
    lexicon = _load_lexicon(args)
    cfg = _load_config(args)
    sources = [tokenize(line) for line in _read_lines(args.input)]

    trace_fh = open(args.trace, "w", encoding="utf-8") if args.trace else None
    failures = 0
    outputs = []
    try:
        if args.backend == "oracle" and args.references:
            # Per-sentence oracle: iterates all the way to each reference.
            targets = [tokenize(line) for line in _read_lines(args.references)]
            if len(targets) != len(sources):
                raise ValueError(
                    f"{len(sources)} input sentences but {len(targets)} references"
                )
            for src, tgt in zip(sources, targets):
                backend = OracleBackend(tgt, vocab, lexicon)
                out, trace = simplify(src, backend, vocab, cfg, lexicon)
                outputs.append(detokenize(out))
                if trace_fh:
                    trace_fh.write(json.dumps(trace.to_dict()) + "\n")
        else:
            backend = _make_batch_backend(args, vocab, sources, lexicon)
            try:
                results = simplify_batch(
                    sources, backend, vocab, cfg,
                    parallelism=args.parallelism, lexicon=lexicon,
                )
            finally:
                _close_backend(backend)
            for lineno, (src, item) in enumerate(zip(sources, results), 1):
                if item.ok:
                    outputs.append(detokenize(item.output))
                    if trace_fh:
                        trace_fh.write(json.dumps(item.trace.to_dict()) + "\n")
                else:
                    failures += 1
                    outputs.append(detokenize(src))  # degrade to the input line
                    print(f"line {lineno}: {item.error}", file=sys.stderr)
                    if trace_fh:
                        trace_fh.write(json.dumps({"error": item.error}) + "\n")
    finally:
        if trace_fh:
            trace_fh.close()
    _write_lines(args.output, outputs)
    if failures:
        print(f"{failures} lines failed; their inputs were passed through", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_OK


def cmd_evaluate(args) -> int:
    records = read_eval_tsv(args.records)
    report = evaluate(records, with_fkgl=not args.no_fkgl)
    print(report.pretty())
    if args.tsv_out:
        with open(args.tsv_out, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
    return EXIT_OK


def cmd_tune(args) -> int:
    vocab = TagVocabulary.load(args.vocab)
    lexicon = _load_lexicon(args)
    dev = []
    for lineno, line in enumerate(_read_lines(args.dev), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise ValueError(f"{args.dev}:{lineno}: need source and >=1 reference")
        dev.append((fields[0], tuple(fields[1:])))
    sources = [tokenize(src) for src, _ in dev]
    if args.backend == "oracle":
        pairs = [(src, tokenize(refs[0])) for src, (_, refs) in zip(sources, dev)]
        backend = CorpusOracleBackend(pairs, vocab, lexicon)
    else:
        backend = _make_batch_backend(args, vocab, sources, lexicon)
    try:
        result = tune(dev, backend, vocab, budget=args.budget, seed=args.seed,
                      lexicon=lexicon)
    finally:
        _close_backend(backend)
    with open(args.config_out, "w", encoding="utf-8") as fh:
        fh.write(result.config.to_text())
    if args.log_out:
        with open(args.log_out, "w", encoding="utf-8") as fh:
            fh.write(tune_log_tsv(result))
    c = result.config
    print(
        f"best dev sari {result.dev_sari:.4f} with keep_bias={c.keep_bias:.4f} "
        f"delete_bias={c.delete_bias:.4f} min_edit_prob={c.min_edit_prob:.4f} "
        f"iterations={c.max_iterations}"
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    vocab = TagVocabulary.load(args.vocab)
    lexicon = _load_lexicon(args)
    cfg = _load_config(args)
    sources = [tokenize(line) for line in _read_lines(args.corpus)]
    backend = _make_batch_backend(args, vocab, sources, lexicon)
    try:
        report = run_bench(
            sources,
            backend,
            vocab,
            cfg,
            batch_size=args.batch_size,
            runs=args.runs,
            parallelism=args.parallelism,
            lexicon=lexicon,
        )
    finally:
        _close_backend(backend)
    print(report.pretty())
    if args.tsv_out:
        with open(args.tsv_out, "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagsimp", description="Text simplification by iterative edit tagging"
    )
    parser.add_argument("--seed", type=int, default=1, help="seed for all randomness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="normalize a corpus, optionally filtering brackets")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--filter-brackets", action="store_true")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("build-vocab", help="build a tag vocabulary from a parallel TSV")
    p.add_argument("corpus")
    p.add_argument("output")
    p.add_argument("--capacity", type=int, default=5000)
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("train-stat", help="train the statistical tagger")
    p.add_argument("corpus")
    p.add_argument("output")
    p.add_argument("--vocab", required=True)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--hash-dim", type=int, default=DEFAULT_HASH_DIM)
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_train_stat)

    p = sub.add_parser("simplify", help="simplify sentences, one per line")
    p.add_argument("input")
    p.add_argument("output")
    _add_backend_args(p)
    _add_config_args(p)
    p.add_argument("--trace", help="write per-sentence traces as JSON lines")
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("evaluate", help="score source<TAB>system<TAB>refs records")
    p.add_argument("records")
    p.add_argument("--tsv-out")
    p.add_argument("--no-fkgl", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tune", help="search inference tweaks on a dev set")
    p.add_argument("dev", help="TSV: source<TAB>ref1[<TAB>ref2 ...]")
    _add_backend_args(p)
    p.add_argument("--budget", type=int, default=32)
    p.add_argument("--config-out", required=True)
    p.add_argument("--log-out")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("bench", help="time batched inference per iteration count")
    p.add_argument("corpus")
    _add_backend_args(p)
    _add_config_args(p)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--tsv-out")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProtocolError, PeerUnavailable, InvariantViolation, ShapeMismatch) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (TagsimpError, OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
