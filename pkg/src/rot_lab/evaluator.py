"""Deduplicating evaluation and context-length statistics.

A test set is evaluated by finding every unique context it depends on,
teacher-forcing each unique context once, and marking a problem correct
only if all of its contexts pass.  This matches free-running inference for
deterministic models while skipping repeated subproblems.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import tokens as tk
from .contexts import (
    build_cot_context,
    build_rot_tree,
    iter_contexts,
    render_question,
    rot_generated_tokens,
    wt_training_pair,
)
from .problems import Problem, Task, sample_problems
from .tokens import TokenSeq


@dataclass
class ContextVerdict:
    passed: bool
    error: str | None = None


@dataclass
class EvalReport:
    accuracy: float
    problem_verdicts: list[bool]
    context_verdicts: dict[TokenSeq, ContextVerdict]
    unique_contexts: int
    total_contexts: int

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "problems": len(self.problem_verdicts),
            "unique_contexts": self.unique_contexts,
            "total_contexts": self.total_contexts,
            "problem_verdicts": self.problem_verdicts,
            "failed_contexts": [
                {"context": tk.to_text(key), "error": verdict.error}
                for key, verdict in self.context_verdicts.items()
                if not verdict.passed
            ],
        }


def problem_context_pairs(problem: Problem, thought_type: str,
                          ) -> list[tuple[TokenSeq, TokenSeq]]:
    """(context, target) pairs a problem depends on, without duplicates."""
    if thought_type == "rot":
        pairs = []
        seen: set[TokenSeq] = set()
        for ctx in iter_contexts(build_rot_tree(problem)):
            if ctx.rendered not in seen:
                seen.add(ctx.rendered)
                pairs.append((ctx.rendered, ctx.target))
        return pairs
    if thought_type == "cot":
        cot = build_cot_context(problem)
        q_len = len(render_question(problem))
        return [(cot, (tk.PAD,) * q_len + cot[q_len:])]
    if thought_type == "wt":
        return [wt_training_pair(problem)]
    raise ValueError(f"unknown thought type {thought_type!r}")


def collect_unique_contexts(problems: list[Problem], thought_type: str = "rot",
                            ) -> tuple[dict[TokenSeq, TokenSeq], list[frozenset]]:
    """Unique (context -> target) map plus each problem's dependency set."""
    contexts: dict[TokenSeq, TokenSeq] = {}
    membership: list[frozenset] = []
    dep_cache: dict[Problem, frozenset] = {}
    for problem in problems:
        deps = dep_cache.get(problem)
        if deps is None:
            pairs = problem_context_pairs(problem, thought_type)
            for x, y in pairs:
                contexts.setdefault(x, y)
            deps = frozenset(x for x, _ in pairs)
            dep_cache[problem] = deps
        membership.append(deps)
    return contexts, membership


def evaluate_context(model, context: TokenSeq, target: TokenSeq) -> ContextVerdict:
    """Teacher forcing: every non-PAD target token must be predicted."""
    if len(context) > model.max_context:
        return ContextVerdict(False, "ContextOverflow")
    if hasattr(model, "predict_targets"):
        predicted = model.predict_targets(context)
        for i, want in enumerate(target):
            if want != tk.PAD and predicted[i] != want:
                return ContextVerdict(False)
        return ContextVerdict(True)
    for i, want in enumerate(target):
        if want != tk.PAD and model.next_token(context[:i]) != want:
            return ContextVerdict(False)
    return ContextVerdict(True)


def aggregate(membership: list[frozenset],
              verdicts: dict[TokenSeq, ContextVerdict],
              total_contexts: int) -> EvalReport:
    problem_verdicts = [
        all(verdicts[key].passed for key in deps) for deps in membership]
    accuracy = (sum(problem_verdicts) / len(problem_verdicts)
                if problem_verdicts else 0.0)
    return EvalReport(accuracy, problem_verdicts, verdicts,
                      unique_contexts=len(verdicts),
                      total_contexts=total_contexts)


def evaluate_problems(model, problems: list[Problem], thought_type: str = "rot",
                      workers: int = 1) -> EvalReport:
    """Deduplicated evaluation of a test set; workers never change the report."""
    contexts, membership = collect_unique_contexts(problems, thought_type)
    total = sum(len(deps) for deps in membership)
    items = list(contexts.items())
    if workers <= 1:
        verdicts = {x: evaluate_context(model, x, y) for x, y in items}
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(lambda pair: evaluate_context(model, *pair), items)
            verdicts = {x: verdict for (x, _), verdict in zip(items, results)}
    return aggregate(membership, verdicts, total)


def evaluate_problems_naive(model, problems: list[Problem],
                            thought_type: str = "rot") -> list[bool]:
    """Reference evaluation re-checking every context of every tree."""
    out = []
    for problem in problems:
        if thought_type == "rot":
            pairs = [(c.rendered, c.target)
                     for c in iter_contexts(build_rot_tree(problem), dedup=False)]
        else:
            pairs = problem_context_pairs(problem, thought_type)
        out.append(all(evaluate_context(model, x, y).passed for x, y in pairs))
    return out


# ---------------------------------------------------------------------------
# Context-length and token statistics
# ---------------------------------------------------------------------------

@dataclass
class LengthStats:
    task: str
    difficulty: int
    samples: int
    rot_lengths: list[int] = field(default_factory=list)
    cot_lengths: list[int] = field(default_factory=list)
    rot_max_lengths: list[int] = field(default_factory=list)  # per problem
    naive_totals: list[int] = field(default_factory=list)
    dedup_totals: list[int] = field(default_factory=list)

    def histogram(self, series: str, bucket: int = 64) -> dict[int, int]:
        values = getattr(self, series)
        return dict(sorted(Counter(v // bucket * bucket for v in values).items()))


def length_and_token_stats(task: Task, difficulty: int, samples: int,
                           seed: int = 0) -> LengthStats:
    stats = LengthStats(task.value, difficulty, samples)
    for problem in sample_problems(task, difficulty, samples, seed):
        lengths = [len(c.rendered)
                   for c in iter_contexts(build_rot_tree(problem))]
        stats.rot_lengths.extend(lengths)
        stats.rot_max_lengths.append(max(lengths))
        stats.cot_lengths.append(len(build_cot_context(problem)))
        stats.naive_totals.append(rot_generated_tokens(problem))
        stats.dedup_totals.append(rot_generated_tokens(problem, dedup=True))
    return stats


def write_report_json(path, report: EvalReport, config: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"config": config, **report.as_dict()}, f, ensure_ascii=False,
                  indent=2)
        f.write("\n")


def write_report_csv(path, rows: list[dict]) -> None:
    fieldnames = ["task", "difficulty", "thought", "accuracy",
                  "unique_contexts", "total_contexts"]
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def write_histograms_csv(path, stats: LengthStats, bucket: int = 64) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["series", "bucket_start", "count"])
        for series in ("rot_lengths", "cot_lengths"):
            for start, count in stats.histogram(series, bucket).items():
                writer.writerow([series, start, count])
