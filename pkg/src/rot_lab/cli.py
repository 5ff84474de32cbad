"""Command-line interface: generate, train, eval, stats, and export.

Artifacts land under --out (default: the ROT_LAB_OUT environment variable,
then ./artifacts) and embed the resolved configuration and seed so any run
can be reproduced byte-for-byte.

Exit codes: 0 success, 1 a requested criterion failed (accuracy threshold
or context-limit feasibility), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from dataclasses import asdict
from pathlib import Path

from . import tokens as tk
from .contexts import write_dataset
from .engine import InferenceLimits
from .evaluator import (
    evaluate_problems,
    length_and_token_stats,
    problem_context_pairs,
    write_histograms_csv,
    write_report_csv,
    write_report_json,
)
from .exporter import derive_prompt_completions, write_jsonl
from .models.oracle import OracleModel
from .models.training import TrainConfig, load_checkpoint, train_loop, write_metrics
from .models.transformer import ModelConfig
from .problems import ConfigurationError, Task, sample_problems

THOUGHT_TYPES = ("wt", "cot", "rot")


def _task(name: str) -> Task:
    try:
        return Task(name)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown task {name!r}; choose from "
            f"{', '.join(t.value for t in Task)}")


def _out_dir(args) -> Path:
    root = args.out or os.environ.get("ROT_LAB_OUT") or "artifacts"
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as f:
        config = json.load(f)
    if not isinstance(config, dict):
        raise ConfigurationError("config file must hold a JSON object")
    return config


def _sub_config(config: dict, key: str, cls):
    try:
        return cls(**config.get(key, {}))
    except TypeError as exc:
        raise ConfigurationError(f"bad {key} config: {exc}") from exc


def _provenance(args, extra: dict | None = None) -> dict:
    info = {
        "task": args.task.value,
        "difficulty": args.difficulty,
        "thought": getattr(args, "thought", None),
        "seed": args.seed,
        "n": args.n,
    }
    info.update(extra or {})
    return info


def cmd_generate(args) -> int:
    out = _out_dir(args)
    problems = sample_problems(args.task, args.difficulty, args.n, args.seed)
    stem = f"{args.task.value}-{args.difficulty}-{args.thought}-seed{args.seed}"
    data_path = out / f"{stem}.jsonl"
    count = write_dataset(data_path, problems, args.thought)
    manifest = _provenance(args, {"records": count, "dataset": data_path.name})
    with open(out / f"{stem}.manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    print(f"wrote {count} records to {data_path}")
    return 0


def cmd_train(args) -> int:
    out = _out_dir(args)
    config = _load_config(args.config)
    model_config = _sub_config(config, "model", ModelConfig)
    overrides = dict(config.get("train", {}))
    overrides.setdefault("seed", args.seed)
    if args.n:
        overrides.setdefault("eval_problems", args.n)
    train_config = _sub_config({"train": overrides}, "train", TrainConfig)
    model, metrics = train_loop(
        args.task, args.difficulty, args.thought,
        model_config=model_config, config=train_config, out_dir=out)
    write_metrics(out / "metrics.csv", metrics)
    final = metrics[-1]["accuracy"] if metrics else 0.0
    print(f"final accuracy {final:.4f} after {metrics[-1]['step']} steps")
    return 0


def _load_model(args):
    if args.checkpoint:
        model, _ = load_checkpoint(args.checkpoint)
        return model
    return OracleModel(max_context=args.max_context)


def cmd_eval(args) -> int:
    out = _out_dir(args)
    model = _load_model(args)
    rows = []
    accuracies = []
    overflowed = False
    for seed in args.seed_list:
        problems = sample_problems(args.task, args.difficulty, args.n, seed)
        report = evaluate_problems(model, problems, thought_type=args.thought,
                                   workers=args.workers)
        accuracies.append(report.accuracy)
        overflowed |= any(v.error == "ContextOverflow"
                          for v in report.context_verdicts.values())
        rows.append({"task": args.task.value, "difficulty": args.difficulty,
                     "thought": args.thought, "accuracy": report.accuracy,
                     "unique_contexts": report.unique_contexts,
                     "total_contexts": report.total_contexts})
        stem = (f"eval-{args.task.value}-{args.difficulty}-{args.thought}"
                f"-seed{seed}")
        write_report_json(out / f"{stem}.json", report,
                          _provenance(args, {"seed": seed}))
    write_report_csv(
        out / f"eval-{args.task.value}-{args.difficulty}-{args.thought}.csv",
        rows)
    mean = statistics.fmean(accuracies)
    spread = statistics.pstdev(accuracies) if len(accuracies) > 1 else 0.0
    print(f"accuracy {mean:.4f} ± {spread:.4f} over {len(accuracies)} seed(s)")
    if overflowed:
        print("context limit exceeded for some contexts "
              f"(max_context={args.max_context})")
        return 1
    if args.min_accuracy is not None and mean < args.min_accuracy:
        print(f"accuracy below required {args.min_accuracy}")
        return 1
    return 0


def cmd_stats(args) -> int:
    out = _out_dir(args)
    stats = length_and_token_stats(args.task, args.difficulty, args.n, args.seed)
    stem = f"stats-{args.task.value}-{args.difficulty}-seed{args.seed}"
    write_histograms_csv(out / f"{stem}.csv", stats)
    summary = _provenance(args, {
        "rot_max_length": max(stats.rot_lengths),
        "cot_max_length": max(stats.cot_lengths),
        "naive_tokens_total": sum(stats.naive_totals),
        "dedup_tokens_total": sum(stats.dedup_totals),
    })
    with open(out / f"{stem}.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    print(f"RoT max context {max(stats.rot_lengths)}, "
          f"CoT max context {max(stats.cot_lengths)}")
    return 0


def cmd_export(args) -> int:
    out = _out_dir(args)
    problems = sample_problems(args.task, args.difficulty, args.n, args.seed)
    records = []
    for problem in problems:
        for context, target in problem_context_pairs(problem, args.thought):
            records.extend(derive_prompt_completions(context, target))
    stem = f"export-{args.task.value}-{args.difficulty}-{args.thought}" \
           f"-seed{args.seed}"
    count = write_jsonl(out / f"{stem}.jsonl", records)
    print(f"wrote {count} prompt/completion records")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rot-lab",
        description="Recursive multi-context reasoning data, models, and "
                    "evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, thought=True):
        p.add_argument("--task", type=_task, required=True)
        p.add_argument("--difficulty", type=int, required=True)
        if thought:
            p.add_argument("--thought", choices=THOUGHT_TYPES, default="rot")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--n", type=int, default=1000,
                       help="problem count (eval set size for train)")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output directory "
                                     "(default $ROT_LAB_OUT or ./artifacts)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("generate", help="write a dataset JSONL + manifest")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train the tiny transformer")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="deduplicated teacher-forced evaluation")
    common(p)
    p.add_argument("--checkpoint", help="model checkpoint (default: oracle)")
    p.add_argument("--max-context", type=int, default=2048)
    p.add_argument("--min-accuracy", type=float)
    p.add_argument("--seeds", type=int, nargs="*",
                   help="extra seeds; results reported as mean ± stddev")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="context length and token statistics")
    common(p, thought=False)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="prompt/completion JSONL export")
    common(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seeds"):
        args.seed_list = [args.seed] + list(args.seeds or [])
    try:
        return args.func(args)
    except (ConfigurationError, tk.ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
