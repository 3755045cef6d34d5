"""Batch command-line interface.

Subcommands: evaluate, split, partitions, finetune-prep, correlate, stats,
serve. Every subcommand accepts --seed, --alpha (false-positive weight,
default 0.2), and --out. The bundled mini corpus and replay fixtures are the
defaults, so everything runs offline out of the box.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bundled
from .annotation import dump_corpus, label_distribution, load_corpus_file, render_label_table
from .errors import PraiseKitError
from .experiment import (
    PartitionPlan,
    ScoreRecord,
    SplitSpec,
    correlate_ratings,
    emit_finetune_dataset,
    make_partitions,
    read_ratings,
    render_correlation_report,
    render_stats_table,
    run_evaluation,
    split_train_test,
    summarize_scores,
)
from .annotation import PraiseType
from .llm import ClientConfig, HttpChatClient, ReplayChatClient
from .metrics import MiouConfig


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--alpha", type=float, default=0.2, help="false-positive weight (default 0.2)")
    common.add_argument("--out", type=Path, default=None, help="output file or directory")
    common.add_argument(
        "--corpus",
        type=Path,
        default=None,
        help="line-delimited corpus (default: bundled mini corpus)",
    )

    parser = argparse.ArgumentParser(prog="praisekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    evaluate = sub.add_parser("evaluate", parents=[common], help="score model highlights against gold spans")
    evaluate.add_argument("--fixtures", type=Path, default=None, help="replay fixture file (default: bundled gpt35)")
    evaluate.add_argument("--live", action="store_true", help="call the configured provider instead of replaying")
    evaluate.add_argument("--model", default="gpt-3.5-turbo-0125", help="model id for live calls")

    split = sub.add_parser("split", parents=[common], help="seeded train/test split")
    split.add_argument("--fraction", type=float, default=0.5, help="training fraction (default 0.5)")

    partitions = sub.add_parser("partitions", parents=[common], help="seeded training-size subsets")
    partitions.add_argument("--sizes", default="13,26,39,52,65", help="comma-separated subset sizes")
    partitions.add_argument("--seeds-per-size", type=int, default=5, dest="seeds_per_size")
    partitions.add_argument("--no-split", action="store_true", help="sample from the corpus as-is instead of its train half")
    partitions.add_argument("--fraction", type=float, default=0.5, help="training fraction before sampling")

    finetune = sub.add_parser("finetune-prep", parents=[common], help="emit the fine-tuning conversation dataset")

    correlate = sub.add_parser("correlate", parents=[common], help="correlate span scores with human ratings")
    correlate.add_argument("--scores", type=Path, required=True, help="JSON report from `evaluate`")
    correlate.add_argument("--ratings", type=Path, required=True, help="ratings CSV")

    stats = sub.add_parser("stats", parents=[common], help="token label distribution")

    serve = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--mode", choices=("replay", "live"), default="replay")
    serve.add_argument("--fixtures", type=Path, default=None, help="replay fixture file (default: bundled demo)")

    return parser


def _load_corpus_arg(args) -> "Corpus":
    path = args.corpus or bundled.mini_corpus_path()
    return load_corpus_file(path)


def _records_payload(records) -> list[dict]:
    return [
        {
            "response_id": r.response_id,
            "praise_type": r.praise_type.value,
            "span_miou": r.span_miou,
            "token_miou": r.token_miou,
            "f1": r.f1,
            "iou": r.iou,
        }
        for r in records
    ]


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _cmd_evaluate(args) -> int:
    corpus = _load_corpus_arg(args)
    cfg = MiouConfig(alpha=args.alpha)
    if args.live:
        client = HttpChatClient(ClientConfig.from_env(model_id=args.model))
        model_id = args.model
    else:
        fixtures = args.fixtures or bundled.fixture_path("gpt35")
        client = ReplayChatClient.from_file(fixtures)
        model_id = f"replay:{Path(fixtures).stem}"
    result = run_evaluation(client, corpus, cfg)
    payload = {
        "alpha": cfg.alpha,
        "model_id": model_id,
        "records": _records_payload(result.records),
        "failures": [{"response_id": f.response_id, "error": f.error} for f in result.failures],
    }
    if result.records:
        summary = summarize_scores(result.records)
        payload["summary"] = {
            ptype.value: {"mean": s.mean, "std": s.std, "min": s.min, "max": s.max}
            for ptype, s in summary.items()
        }
        print(render_stats_table([(f"n={len(corpus)}", summary)], label="Test set"))
    for record in result.records:
        print(
            f"{record.response_id:<12} {record.praise_type.value:<8} "
            f"span={record.span_miou:.2f} token={record.token_miou:.2f} "
            f"f1={record.f1:.2f} iou={record.iou:.2f}"
        )
    for failure in result.failures:
        print(f"{failure.response_id:<12} FAILED   {failure.error}", file=sys.stderr)
    if args.out:
        _write_json(args.out, payload)
        print(f"wrote {args.out}")
    return 0


def _cmd_split(args) -> int:
    corpus = _load_corpus_arg(args)
    train, test = split_train_test(corpus, SplitSpec(train_fraction=args.fraction, seed=args.seed))
    out_dir = args.out or Path("split")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", train), ("test", test)):
        with open(out_dir / f"{name}.jsonl", "w", encoding="utf-8") as sink:
            dump_corpus(part, sink)
    print(f"split {len(corpus)} responses into {len(train)} train / {len(test)} test (seed {args.seed})")
    print(f"wrote {out_dir}/train.jsonl and {out_dir}/test.jsonl")
    return 0


def _cmd_partitions(args) -> int:
    corpus = _load_corpus_arg(args)
    sizes = tuple(int(s) for s in args.sizes.split(","))
    if args.no_split:
        train = corpus
    else:
        train, _ = split_train_test(corpus, SplitSpec(train_fraction=args.fraction, seed=args.seed))
    plan = PartitionPlan(sizes=sizes, seeds_per_size=args.seeds_per_size, base_seed=args.seed)
    parts = make_partitions(train, plan)
    out_dir = args.out or Path("partitions")
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for part in parts:
        name = f"size{part.size}_seed{part.seed}.jsonl"
        with open(out_dir / name, "w", encoding="utf-8") as sink:
            dump_corpus(part.subset, sink)
        manifest.append({"size": part.size, "seed": part.seed, "file": name, "ids": list(part.subset.ids())})
    _write_json(out_dir / "manifest.json", manifest)
    print(f"wrote {len(parts)} partitions to {out_dir} (sizes {args.sizes}, {args.seeds_per_size} seeds each)")
    return 0


def _cmd_finetune_prep(args) -> int:
    corpus = _load_corpus_arg(args)
    out = args.out or Path("finetune.jsonl")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as sink:
        count = emit_finetune_dataset(corpus, sink)
    print(f"wrote {count} fine-tuning records to {out}")
    return 0


def _cmd_correlate(args) -> int:
    report_payload = json.loads(args.scores.read_text(encoding="utf-8"))
    records = [
        ScoreRecord(
            response_id=r["response_id"],
            praise_type=PraiseType(r["praise_type"]),
            span_miou=r["span_miou"],
            token_miou=r["token_miou"],
            f1=r["f1"],
            iou=r["iou"],
        )
        for r in report_payload["records"]
    ]
    with open(args.ratings, "r", encoding="utf-8", newline="") as handle:
        ratings = read_ratings(handle)
    report = correlate_ratings(records, ratings)
    print(render_correlation_report(report))
    if args.out:
        _write_json(
            args.out,
            [
                {
                    "praise_type": c.praise_type.value,
                    "coder_id": c.coder_id,
                    "pearson": c.pearson,
                    "normalized_mean": c.normalized_mean,
                    "n": c.n,
                }
                for c in report.cells
            ],
        )
        print(f"wrote {args.out}")
    return 0


def _cmd_stats(args) -> int:
    corpus = _load_corpus_arg(args)
    dist = label_distribution(corpus, "gold")
    print(render_label_table(dist, title=f"{len(corpus)} responses"))
    if args.out:
        _write_json(
            args.out,
            {
                "total": dist.total,
                "labels": {
                    label.value: {"count": dist.counts[label], "percent": dist.percentage(label)}
                    for label in dist.counts
                },
            },
        )
        print(f"wrote {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceSettings, create_app

    settings = ServiceSettings(
        default_mode=args.mode,
        fixtures=args.fixtures or bundled.fixture_path("demo"),
        alpha=args.alpha,
    )
    uvicorn.run(create_app(settings), host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "split": _cmd_split,
    "partitions": _cmd_partitions,
    "finetune-prep": _cmd_finetune_prep,
    "correlate": _cmd_correlate,
    "stats": _cmd_stats,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PraiseKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
