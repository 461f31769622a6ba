"""Command line entry point.

One subcommand per stage plus ``all``. Settings come from defaults, then
a config file (--config), then the LITKG_THREADS environment variable
(threads only), then explicit flags. Exit codes: 0 success, 1 stage
failure, 2 bad configuration or usage.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, LitkgError, StageError
from .pipeline import STAGES, build_config, parse_config_file, run_pipeline


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file with 'key = value' lines")
    p.add_argument("--in", dest="input", help="input N-Triples file")
    p.add_argument("--out", help="output directory")
    p.add_argument(
        "--abstract-property",
        action="append",
        dest="abstract_properties",
        metavar="IRI",
        help="predicate whose English literals are abstracts (repeatable)",
    )
    p.add_argument("--label-property", metavar="IRI", help="predicate carrying term labels")
    p.add_argument("--lenient", action="store_true", default=None,
                   help="skip malformed input lines instead of failing")
    p.add_argument("--match-predicates", action="store_true", default=None,
                   help="also link predicate labels in abstracts")
    p.add_argument("--debug-corpus", action="store_true", default=None,
                   help="write the entity-linked corpus as linked_corpus.txt")
    p.add_argument("--restart-alpha", type=float, help="restart probability for graph walks")
    p.add_argument("--epsilon", type=float, help="paint threshold for graph walks")
    p.add_argument("--include-predicates", action="store_true", default=None,
                   help="credit predicates with walk mass")
    p.add_argument("--window", type=int, help="text co-occurrence window size")
    p.add_argument("--weighting", choices=["harmonic", "uniform"],
                   help="distance weighting inside the window")
    p.add_argument("--min-word-count", type=int, help="drop words rarer than this")
    p.add_argument("--dims", type=int, help="embedding dimensions")
    p.add_argument("--iterations", type=int, help="training epochs")
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--x-max", type=float, help="weighting cutoff in the training objective")
    p.add_argument("--weight-exponent", type=float)
    p.add_argument("--seed", type=int, help="random seed for init and shuffling")
    det = p.add_mutually_exclusive_group()
    det.add_argument("--deterministic", dest="deterministic", action="store_true",
                     default=None, help="bit-reproducible training (default)")
    det.add_argument("--no-deterministic", dest="deterministic", action="store_false",
                     help="lock-free threaded training; results vary run to run")
    p.add_argument("--kth", type=int,
                   help="k for scaling the text matrix by its k-th largest entry")
    p.add_argument("--kth-distinct", action="store_true", default=None,
                   help="rank distinct values instead of the multiset")
    p.add_argument("--combine", choices=["sum", "focus"],
                   help="emit w+wt (sum) or w alone (focus)")
    p.add_argument("--threads", type=int, help="worker threads")


_OVERRIDE_KEYS = [
    "input", "out", "abstract_properties", "label_property", "lenient",
    "match_predicates", "debug_corpus", "restart_alpha", "epsilon",
    "include_predicates", "window", "weighting", "min_word_count", "dims",
    "iterations", "learning_rate", "x_max", "weight_exponent", "seed",
    "deterministic", "kth", "kth_distinct", "combine", "threads",
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litkg",
        description="Embed knowledge graph entities, predicates, and abstract "
        "words in one vector space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "parse": "read N-Triples; write vocab.tsv, graph.nt, abstracts.tsv",
        "text-cooc": "link abstracts and count window co-occurrences",
        "graph-cooc": "run personalized walks and build the graph matrix",
        "merge": "scale the text matrix and sum it with the graph matrix",
        "train": "train embeddings on the merged matrix",
        "all": "run every stage in order",
    }
    for name in (*STAGES, "all"):
        p = sub.add_parser(name, help=descriptions[name])
        _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        file_values = parse_config_file(args.config) if args.config else {}

        env_threads = os.environ.get("LITKG_THREADS")
        if env_threads is not None and "threads" not in _explicit(args):
            try:
                file_values["threads"] = int(env_threads)
            except ValueError:
                raise ConfigError(f"LITKG_THREADS: cannot parse {env_threads!r} as int")

        overrides = {k: getattr(args, k) for k in _OVERRIDE_KEYS}
        if overrides.get("abstract_properties") is not None:
            overrides["abstract_properties"] = tuple(overrides["abstract_properties"])
        cfg = build_config(file_values, overrides)

        stages = STAGES if args.command == "all" else (args.command,)
        results = run_pipeline(cfg, stages)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LitkgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for r in results:
        status = r.summary if r.ran else f"skipped ({r.summary})"
        print(f"{r.stage}: {status}")
    return 0


def _explicit(args: argparse.Namespace) -> set[str]:
    return {k for k in _OVERRIDE_KEYS if getattr(args, k, None) is not None}


if __name__ == "__main__":
    sys.exit(main())
