"""Command line: `hwatopics detect | evaluate | tune`.

Usage:
    hwatopics detect --posts posts.jsonl --vectors wiki.vec --stopwords stop.txt
    hwatopics evaluate --topics topics.jsonl --gt gt.json --report report.json
    hwatopics tune --posts posts.jsonl --vectors wiki.vec --gt gt.json --out grid.csv

Data (JSONL, JSON, CSV) goes to stdout unless an output path is given; logs go
to stderr. Exit codes: 0 ok, 1 usage or configuration, 2 input/output,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path
from typing import IO, Iterator

from hwatopics import __version__
from hwatopics.config import Config, resolve_config
from hwatopics.errors import ConfigError, InputError, InvariantViolation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3

LOG_FORMAT = "%(asctime)s : %(levelname)s : %(message)s"

# CLI dest -> Config field, for flags that override configuration.
CONFIG_FLAGS = (
    "posts", "stopwords", "vectors", "gt", "out", "origin", "window_minutes",
    "h", "delta", "log_base", "min_cluster_size", "min_samples",
    "allow_single_cluster", "top_k", "workers", "match_threshold", "keyword_m",
    "topk_grid", "h_grid", "delta_grid",
)


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number_list(cast):
    def parse(text: str) -> tuple:
        try:
            return tuple(cast(v) for v in text.split(",") if v.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}") from exc
    return parse


@contextlib.contextmanager
def _output(path: Path | None) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yield f


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_detect(args: argparse.Namespace, config: Config) -> int:
    from hwatopics.pipeline import detect

    results = detect(config)
    with _output(config.out) as out:
        results.write_topics(out)
    if args.word_freq_out:
        with _output(args.word_freq_out) as out:
            results.write_word_frequencies(out)
    if args.debug_dir:
        results.write_debug(args.debug_dir)
    if args.freq_plot:
        from hwatopics.figures import plot_topic_frequencies

        records = [r for w in results.windows for r in w.word_frequency_records()]
        plot_topic_frequencies(records, args.freq_plot)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, config: Config) -> int:
    from hwatopics.evaluation import evaluate_windows, load_ground_truth
    from hwatopics.pipeline import detect
    from hwatopics.results import load_topic_records, topics_by_window

    if config.gt is None:
        raise ConfigError("evaluate needs a ground-truth file (--gt)")
    gt = load_ground_truth(config.gt)
    if args.topics is not None:
        topics = topics_by_window(load_topic_records(args.topics))
    else:
        topics = detect(config).topics_by_window()

    report = evaluate_windows(
        topics, gt, ks=config.topk_grid, threshold=config.match_threshold,
        m=config.keyword_m,
    )
    with _output(args.report) as out:
        out.write(json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
    if args.curve_csv:
        args.curve_csv.parent.mkdir(parents=True, exist_ok=True)
        report.curve_frame().to_csv(args.curve_csv, index=False)
    if args.curve_plot:
        from hwatopics.figures import plot_topk_recall

        plot_topk_recall(report.topk_recall, args.curve_plot)
    logger.info(
        "Topic P=%.4f R=%.4f F1=%.4f; keyword F1=%.4f",
        report.topic.precision, report.topic.recall, report.topic.f1,
        report.keyword.f1,
    )
    return EXIT_OK


def cmd_tune(args: argparse.Namespace, config: Config) -> int:
    from hwatopics.evaluation import load_ground_truth
    from hwatopics.pipeline import load_store, load_windows
    from hwatopics.tuning import tune

    if config.gt is None:
        raise ConfigError("tune needs a ground-truth file (--gt)")
    gt = load_ground_truth(config.gt)
    windows, _ = load_windows(config)
    store = load_store(config)
    grid = tune(windows, store, gt, config)
    with _output(config.out) as out:
        grid.to_csv(out, index=False)
    if args.heatmap_out:
        from hwatopics.figures import plot_tuning_heatmap

        plot_tuning_heatmap(grid, args.heatmap_out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML/JSON config file")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    return common


def _pipeline_parser() -> argparse.ArgumentParser:
    p = ArgumentParser(add_help=False)
    g = p.add_argument_group("pipeline")
    g.add_argument("--posts", type=Path, help="Posts, JSON Lines")
    g.add_argument("--stopwords", type=Path, help="Stopwords, one per line")
    g.add_argument("--vectors", type=Path, help="Word vectors, text format")
    g.add_argument("--origin", type=int, help="Window origin, epoch seconds")
    g.add_argument("--window-minutes", type=int)
    g.add_argument("--h", type=float, help="Keyword rate, percent of vocabulary")
    g.add_argument("--delta", type=float, help="CIMAWA damping factor")
    g.add_argument("--log-base", type=float, help="Logarithm base (default e)")
    g.add_argument("--min-cluster-size", type=int)
    g.add_argument("--min-samples", type=int)
    g.add_argument("--allow-single-cluster", action=argparse.BooleanOptionalAction,
                   help="Let the whole window form one cluster (default on)")
    g.add_argument("--top-k", type=int, help="Topics per window (default all)")
    g.add_argument("--workers", type=int, help="Threads for per-window stages")
    return p


def _eval_parser() -> argparse.ArgumentParser:
    p = ArgumentParser(add_help=False)
    g = p.add_argument_group("evaluation")
    g.add_argument("--gt", type=Path, help="Ground truth, JSON")
    g.add_argument("--match-threshold", type=float,
                   help="Share of optional GT words a topic must contain")
    g.add_argument("--keyword-m", type=int, help="Depth of keyword metrics")
    return p


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="hwatopics",
        description="Topic detection in short-post streams by human word association",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, pipeline, evaluation = _common_parser(), _pipeline_parser(), _eval_parser()

    detect = sub.add_parser("detect", parents=[common, pipeline],
                            help="Detect topics, one JSON line per window")
    detect.add_argument("--out", type=Path, help="Topics JSONL (default stdout)")
    detect.add_argument("--word-freq-out", type=Path,
                        help="Per-topic word frequencies, JSONL")
    detect.add_argument("--debug-dir", type=Path,
                        help="Write per-window stats, associations and patterns")
    detect.add_argument("--freq-plot", type=Path, help="Topic word-frequency figure")
    detect.set_defaults(handler=cmd_detect)

    evaluate = sub.add_parser("evaluate", parents=[common, pipeline, evaluation],
                              help="Score topics against ground truth")
    evaluate.add_argument("--topics", type=Path,
                          help="Output of a previous detect run (else detect now)")
    evaluate.add_argument("--report", type=Path, help="Report JSON (default stdout)")
    evaluate.add_argument("--topk-grid", type=_number_list(int),
                          help="Comma-separated k values for the recall curve")
    evaluate.add_argument("--curve-csv", type=Path, help="Top-k recall curve, CSV")
    evaluate.add_argument("--curve-plot", type=Path, help="Top-k recall figure")
    evaluate.set_defaults(handler=cmd_evaluate)

    tune = sub.add_parser("tune", parents=[common, pipeline, evaluation],
                          help="Grid search over h and delta")
    tune.add_argument("--h-grid", type=_number_list(float),
                      help="Comma-separated h values")
    tune.add_argument("--delta-grid", type=_number_list(float),
                      help="Comma-separated delta values")
    tune.add_argument("--out", type=Path, help="Grid CSV (default stdout)")
    tune.add_argument("--heatmap-out", type=Path, help="Grid heatmap figure")
    tune.set_defaults(handler=cmd_tune)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or EXIT_OK)
    _configure_logging(args)

    overrides = {k: getattr(args, k) for k in CONFIG_FLAGS if hasattr(args, k)}
    try:
        config = resolve_config(overrides, args.config)
        return args.handler(args, config)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except InvariantViolation as exc:
        logger.error("Internal invariant violated: %s", exc)
        return EXIT_INTERNAL
    except (InputError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
