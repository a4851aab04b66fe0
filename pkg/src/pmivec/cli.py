"""Command-line pipeline: vocab -> pairs -> train -> eval.

Every flag can also be set through an environment variable with the
``PMIVEC_`` prefix (``PMIVEC_DIM=100`` mirrors ``--dim 100``); explicit
flags win over the environment.
"""

import argparse
import itertools
import os
import sys
from dataclasses import dataclass, fields

from .cooc import context_marginals, count_corpus
from .errors import PmivecError
from .evaluation import (METHOD_3COSADD, METHOD_3COSMUL, eval_analogy,
                         eval_similarity, format_report,
                         load_analogy_dataset, load_similarity_dataset)
from .extmem import Marginals, sort_collapse, train_mi, train_si, write_pairs
from .negsampler import build_sampler, unigram_sampler
from .seeding import derive_rng
from .trainer import TrainConfig, train_standard
from .vectors import COMBOS, combine, load_vectors, save_vectors
from .vocab import (Vocabulary, build_vocab, encode_corpus, iter_sentences,
                    subsample_corpus)

ENV_PREFIX = "PMIVEC_"


def _env(name, default, cast):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _add_train_params(parser):
    parser.add_argument("--dim", type=int, default=_env("DIM", 300, int))
    parser.add_argument("--window", type=int, default=_env("WINDOW", 2, int))
    parser.add_argument("--iterations", type=int,
                        default=_env("ITERATIONS", 5, int))
    parser.add_argument("--negatives", type=int,
                        default=_env("NEGATIVES", 5, int))
    parser.add_argument("--lr", type=float, default=_env("LR", 0.025, float))
    parser.add_argument("--subsample", type=float,
                        default=_env("SUBSAMPLE", 1e-5, float))
    parser.add_argument("--cds", type=float, default=_env("CDS", 0.75, float))
    parser.add_argument("--positional", action="store_true",
                        default=_env("POSITIONAL", False, bool))
    parser.add_argument("--seed", type=int, default=_env("SEED", 1, int))
    parser.add_argument("--threads", type=int, default=_env("THREADS", 1, int))


def _add_eval_params(parser):
    parser.add_argument("vectors", help="embeddings file (text format)")
    parser.add_argument("datasets", nargs="+", help="benchmark files")
    parser.add_argument("--no-lowercase", action="store_true",
                        default=_env("NO_LOWERCASE", False, bool),
                        help="look dataset words up without lowercasing")
    parser.add_argument("--strict-oov", action="store_true",
                        default=_env("STRICT_OOV", False, bool),
                        help="score out-of-vocabulary items instead of skipping")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pmivec",
        description="PPMI-factorizing word embeddings with window and noise "
                    "sampling, positional contexts, and an external-memory "
                    "training pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", help="count a corpus and write the vocabulary")
    p.add_argument("corpus")
    p.add_argument("--output", required=True)
    p.add_argument("--min-count", type=int, default=_env("MIN_COUNT", 5, int))
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("pairs", help="write, sort, and collapse the pair file")
    p.add_argument("corpus")
    p.add_argument("--vocab", required=True)
    p.add_argument("--out-prefix", default=_env("OUT_PREFIX", "pmivec", str))
    p.add_argument("--chunk-size", type=int,
                   default=_env("CHUNK_SIZE", 1_000_000, int),
                   help="records sorted in memory per run")
    _add_train_params(p)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("train", help="train embeddings and write them")
    p.add_argument("--mode", choices=("standard", "mi", "si"),
                   default=_env("MODE", "standard", str))
    p.add_argument("--vocab", required=True)
    p.add_argument("--corpus", help="required for --mode standard")
    p.add_argument("--pairs", help="collapsed pair file (mi/si modes)")
    p.add_argument("--marginals", help="marginals sidecar (mi/si modes)")
    p.add_argument("--output", required=True, help="embeddings file to write")
    p.add_argument("--combo", choices=COMBOS, default=_env("COMBO", "W", str))
    p.add_argument("--buckets", type=int, default=_env("BUCKETS", 16, int),
                   help="external shuffle buckets")
    p.add_argument("--chunk-size", type=int,
                   default=_env("CHUNK_SIZE", 200_000, int),
                   help="tuple lines streamed per training block")
    p.add_argument("--manifest", help="run manifest path "
                                      "(default: <output>.manifest)")
    _add_train_params(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-sim", help="word-similarity benchmarks")
    _add_eval_params(p)
    p.set_defaults(func=cmd_eval_sim)

    p = sub.add_parser("eval-analogy", help="word-analogy benchmarks")
    _add_eval_params(p)
    p.add_argument("--method", choices=("add", "mul", "both"),
                   default=_env("METHOD", "both", str))
    p.set_defaults(func=cmd_eval_analogy)
    return parser


@dataclass
class RunManifest:
    """Resolved configuration and artifact paths of one training run."""

    mode: str = "-"
    corpus: str = "-"
    vocab: str = "-"
    pairs: str = "-"
    marginals: str = "-"
    embeddings: str = "-"
    combo: str = "W"
    dim: int = 300
    window: int = 2
    iterations: int = 5
    negatives: int = 5
    lr: float = 0.025
    subsample: float = 1e-5
    cds: float = 0.75
    positional: bool = False
    seed: int = 1
    threads: int = 1

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for f in fields(self):
                fh.write(f"{f.name} = {getattr(self, f.name)}\n")


def _config_from_args(args) -> TrainConfig:
    return TrainConfig(dim=args.dim, win=args.window,
                       iterations=args.iterations, negatives=args.negatives,
                       lr=args.lr, subsample=args.subsample,
                       cds_alpha=args.cds, positional=args.positional,
                       seed=args.seed, threads=args.threads)


def _load_training_stream(args, vocab):
    sentences = encode_corpus(iter_sentences(args.corpus), vocab)
    return subsample_corpus(sentences, vocab, args.subsample,
                            derive_rng(args.seed, "subsample"))


def _make_sampler(args, vocab, col_marginals=None):
    if args.positional:
        return build_sampler(col_marginals)
    return unigram_sampler(vocab)


def cmd_vocab(args):
    tokens = itertools.chain.from_iterable(iter_sentences(args.corpus))
    vocab = build_vocab(tokens, min_count=args.min_count)
    vocab.save(args.output)
    print(f"vocabulary: {len(vocab)} words, {vocab.total_tokens} tokens kept, "
          f"{vocab.oov_tokens} below min-count {args.min_count}")
    return 0


def cmd_pairs(args):
    vocab = Vocabulary.load(args.vocab)
    stream = _load_training_stream(args, vocab)
    cols = None
    if args.positional:
        # The positional noise distribution needs the context marginals, so
        # one marginal-only counting pass precedes the writing pass.
        cols = context_marginals(stream, len(vocab), args.window, True)
    sampler = _make_sampler(args, vocab, cols)
    config = _config_from_args(args)
    raw_path = f"{args.out_prefix}.raw.txt"
    collapsed_path = f"{args.out_prefix}.pairs.txt"
    marginals_path = f"{args.out_prefix}.marginals.txt"
    n_records, marginals = write_pairs(stream, config, sampler,
                                       derive_rng(args.seed, "negatives"),
                                       raw_path)
    n_tuples = sort_collapse(raw_path, collapsed_path, args.chunk_size)
    marginals.save(marginals_path)
    print(f"{n_records} records -> {n_tuples} tuples "
          f"({raw_path}, {collapsed_path}, {marginals_path})")
    return 0


def cmd_train(args):
    vocab = Vocabulary.load(args.vocab)
    config = _config_from_args(args)
    manifest = RunManifest(mode=args.mode, vocab=args.vocab,
                           embeddings=args.output, combo=args.combo,
                           dim=args.dim, window=args.window,
                           iterations=args.iterations,
                           negatives=args.negatives, lr=args.lr,
                           subsample=args.subsample, cds=args.cds,
                           positional=args.positional, seed=args.seed,
                           threads=args.threads)
    if args.mode == "standard":
        if not args.corpus:
            raise PmivecError("--mode standard requires --corpus")
        manifest.corpus = args.corpus
        stream = _load_training_stream(args, vocab)
        stats = count_corpus(stream, len(vocab), args.window, args.positional)
        sampler = _make_sampler(args, vocab, stats.col_marginals)
        emb = train_standard(stream, stats, sampler, config)
    else:
        if not args.pairs or not args.marginals:
            raise PmivecError(f"--mode {args.mode} requires --pairs and --marginals")
        manifest.pairs = args.pairs
        manifest.marginals = args.marginals
        marginals = Marginals.load(args.marginals, args.window, args.positional)
        train = train_mi if args.mode == "mi" else train_si
        emb = train(args.pairs, marginals, config, num_buckets=args.buckets,
                    chunk_lines=args.chunk_size)
    vs = combine(emb, vocab, args.combo)
    save_vectors(vs, args.output)
    manifest.save(args.manifest or f"{args.output}.manifest")
    print(f"wrote {len(vs)} x {vs.dim} vectors ({args.combo}) to {args.output}")
    return 0


def cmd_eval_sim(args):
    vs = load_vectors(args.vectors)
    entries = []
    for path in args.datasets:
        result = eval_similarity(vs, load_similarity_dataset(path),
                                 lowercase=not args.no_lowercase,
                                 strict_oov=args.strict_oov)
        entries.append((os.path.basename(path), "spearman", result.rho,
                        result.coverage))
    print(format_report(entries))
    return 0


def cmd_eval_analogy(args):
    vs = load_vectors(args.vectors)
    methods = {"add": [METHOD_3COSADD], "mul": [METHOD_3COSMUL],
               "both": [METHOD_3COSADD, METHOD_3COSMUL]}[args.method]
    entries = []
    for path in args.datasets:
        questions = load_analogy_dataset(path)
        name = os.path.basename(path)
        for method in methods:
            result = eval_analogy(vs, questions, method=method,
                                  lowercase=not args.no_lowercase,
                                  strict_oov=args.strict_oov)
            entries.append((name, method, result.accuracy, result.coverage))
            for section, (acc, cov) in sorted(result.by_section.items()):
                entries.append((f"{name}/{section}", method, acc, cov))
    print(format_report(entries))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PmivecError as exc:
        print(f"pmivec: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"pmivec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
