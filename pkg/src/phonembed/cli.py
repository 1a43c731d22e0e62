"""Command line entry point: ``phonembed <subcommand> ...``.

Exit codes: 0 success, 1 some tasks failed, 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .cache import ArticulatoryDistance
from .embedders import EmbeddingConfig
from .errors import PhonembedError
from .evalsuite import generate_analogies
from .learning import TrainConfig, train_encoder
from .lexicon import load_lexicon
from .phonology import feature_edit_distance, segment_ipa
from .suite import (
    EMBEDDER_KINDS,
    SWEEP_AXES,
    EmbedderSpec,
    SuiteConfig,
    SuiteReport,
    build_embedder,
    resolve_feature_table,
    run_suite,
    run_sweep,
    sweep_csv,
)
from .suiteio import save_encoder, write_embeddings

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _embedding_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dimension", type=int, default=300)
    p.add_argument("--input-kind", choices=("characters", "ipa", "articulatory"), default="articulatory")


def _train_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--batch-size", type=int, default=TrainConfig.batch_size)
    p.add_argument("--margin", type=float, default=TrainConfig.margin)
    p.add_argument("--hidden", type=int, default=TrainConfig.hidden)
    p.add_argument("--pairs-per-epoch", type=int, default=TrainConfig.pairs_per_epoch)


def _train_config(args) -> TrainConfig:
    return TrainConfig(learning_rate=args.learning_rate, epochs=args.epochs, batch_size=args.batch_size,
                       margin=args.margin, seed=args.seed, pairs_per_epoch=args.pairs_per_epoch,
                       triplets_per_epoch=args.pairs_per_epoch, hidden=args.hidden)


def cmd_distance(args) -> int:
    table = resolve_feature_table(args.feature_table)
    a, b = segment_ipa(args.a, table), segment_ipa(args.b, table)
    print(f"{feature_edit_distance(a, b):.6f}")
    return EXIT_OK


def cmd_embed(args) -> int:
    table = resolve_feature_table(args.feature_table)
    lex = load_lexicon(args.lexicon, table)
    entries = lex.segmented() if args.kind != "count" or args.input_kind != "characters" else lex.entries
    spec = EmbedderSpec(args.kind, EmbeddingConfig(args.dimension, args.input_kind), _train_config(args), args.model)
    embedder = build_embedder(spec, entries, table, ArticulatoryDistance(table), args.seed)
    n = write_embeddings(embedder, entries, args.out)
    logging.info("wrote %d vectors to %s", n, args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    table = resolve_feature_table(args.feature_table)
    entries = load_lexicon(args.lexicon, table).segmented()
    dist = ArticulatoryDistance(table)
    result = train_encoder(entries, _train_config(args), args.objective,
                           EmbeddingConfig(args.dimension, args.input_kind),
                           lambda a, b: dist.distance(a.phon, b.phon), table)
    save_encoder(result.encoder, args.out)
    for epoch, loss in enumerate(result.losses):
        print(f"epoch {epoch}\tloss {loss:.6f}")
    return EXIT_OK


def _suite_config(args) -> SuiteConfig:
    if not args.config:
        raise PhonembedError("--config is required")
    cfg = SuiteConfig.load(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.feature_table:
        changes["feature_table"] = args.feature_table
    return dataclasses.replace(cfg, **changes) if changes else cfg


def cmd_eval(args) -> int:
    cfg = _suite_config(args)
    report = run_suite(cfg)
    _write(report.to_json(), args.out or cfg.output)
    return EXIT_PARTIAL if report.failed else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _suite_config(args)
    values = [int(v) for v in args.values.split(",") if v]
    rows = run_sweep(cfg, args.axis, values)
    _write(sweep_csv(rows), args.out)
    return EXIT_PARTIAL if any(r["failed"] for r in rows) else EXIT_OK


def cmd_analogy_gen(args) -> int:
    from .evalsuite import write_analogies

    table = resolve_feature_table(args.feature_table)
    entries = load_lexicon(args.lexicon, table).segmented()
    quads = generate_analogies(entries, table, args.count, args.seed)
    write_analogies(quads, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    data = json.loads(Path(args.report).read_text(encoding="utf-8"))
    report = SuiteReport.from_dict(data)
    print(f"suite {report.version}  seed {report.seed}  trained on {report.train_language}")
    for lang, block in sorted(report.languages.items()):
        print(f"[{lang}] overall {block['overall']}")
        for s in block["scores"]:
            print(f"  {s['task']:<22} {s['metric']:<16} {s['value']:.4f}  (n={s['n']})")
        for task, why in sorted(block["skipped"].items()):
            print(f"  {task:<22} skipped: {why}")
        for task, why in sorted(block["failed"].items()):
            print(f"  {task:<22} FAILED: {why}")
    print(f"overall {report.overall}")
    return EXIT_PARTIAL if report.failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phonembed", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--feature-table", default=None, help="TSV feature table (overrides $PHONEMBED_FEATURE_TABLE)")
    parser.add_argument("--config", default=None, help="suite config JSON")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="articulatory distance between two IPA strings")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("embed", help="fit or load an embedder and write word vectors")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--kind", choices=[k for k in EMBEDDER_KINDS if k not in ("oracle", "imported")], default="count")
    p.add_argument("--model", default=None, help="encoder file for --kind encoder")
    p.add_argument("--out", required=True)
    _embedding_args(p)
    _train_args(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("train", help="train a pooled encoder")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--objective", choices=("metric", "triplet"), default="metric")
    p.add_argument("--out", required=True)
    _embedding_args(p)
    _train_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="run the evaluation suite")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("analogy-gen", help="generate a sound-analogy corpus")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analogy_gen)

    p = sub.add_parser("sweep", help="dimension or training-size sweep")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma separated, ascending")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="print a report JSON as a table")
    p.add_argument("report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.seed is None and args.command not in ("eval", "sweep"):
        args.seed = 0
    try:
        return args.func(args)
    except (PhonembedError, OSError, ValueError) as exc:
        print(f"phonembed: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
