"""Training loop for the tiny transformer.

Each training example is one context, not one problem: a problem is
sampled from the task distribution, its unique contexts are enumerated,
and one is drawn uniformly.  Loss is next-token cross-entropy with PAD
target positions excluded.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import torch

from .. import tokens as tk
from ..contexts import (
    build_cot_context,
    render_question,
    sample_training_context,
    wt_training_pair,
)
from ..problems import Task, problem_rng, sample_problem, sample_problems
from .transformer import ModelConfig, TinyTransformer, sequence_loss


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    learning_rate: float = 1e-3
    total_steps: int = 20_000
    decay_interval: int = 5_000  # halve the learning rate this often
    eval_interval: int = 1_000
    eval_problems: int = 1_000
    early_stop_accuracy: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if min(self.batch_size, self.total_steps, self.decay_interval,
               self.eval_interval) <= 0:
            raise ValueError("all intervals and sizes must be positive")


# The schedule reported with full-scale results: batch 256, 500K steps,
# halve the learning rate every 50K steps, evaluate every 20K.
FULL_SCALE = TrainConfig(batch_size=256, total_steps=500_000,
                         decay_interval=50_000, eval_interval=20_000,
                         eval_problems=30_000)


def training_example(problem, thought_type: str, rng) -> tuple:
    if thought_type == "rot":
        return sample_training_context(problem, rng)
    if thought_type == "cot":
        cot = build_cot_context(problem)
        q_len = len(render_question(problem))
        return cot, (tk.PAD,) * q_len + cot[q_len:]
    if thought_type == "wt":
        return wt_training_pair(problem)
    raise ValueError(f"unknown thought type {thought_type!r}")


def make_batch(task: Task, difficulty: int, thought_type: str, batch_size: int,
               rng, max_context: int) -> tuple[torch.Tensor, torch.Tensor]:
    """Right-PAD-padded (contexts, targets) tensors for one step."""
    pairs = []
    while len(pairs) < batch_size:
        problem = sample_problem(task, difficulty, rng)
        ctx, target = training_example(problem, thought_type, rng)
        if len(ctx) > max_context:
            raise ValueError(
                f"context of {len(ctx)} tokens exceeds model limit {max_context}")
        pairs.append((ctx, target))
    width = max(len(c) for c, _ in pairs)
    contexts = torch.full((batch_size, width), tk.PAD, dtype=torch.long)
    targets = torch.full((batch_size, width), tk.PAD, dtype=torch.long)
    for i, (ctx, target) in enumerate(pairs):
        contexts[i, :len(ctx)] = torch.tensor(ctx, dtype=torch.long)
        targets[i, :len(target)] = torch.tensor(target, dtype=torch.long)
    return contexts, targets


def lr_at(config: TrainConfig, step: int) -> float:
    return config.learning_rate * 0.5 ** (step // config.decay_interval)


def train_step(model: TinyTransformer, optimizer: torch.optim.Optimizer,
               contexts: torch.Tensor, targets: torch.Tensor) -> float:
    model.train()
    optimizer.zero_grad()
    loss = sequence_loss(model, contexts, targets)
    if not math.isfinite(loss.item()):
        raise RuntimeError(f"non-finite loss {loss.item()}")
    loss.backward()
    optimizer.step()
    return float(loss.item())


def save_checkpoint(path, model: TinyTransformer, optimizer, config: TrainConfig,
                    step: int) -> None:
    torch.save({
        "model_config": asdict(model.cfg),
        "train_config": asdict(config),
        "step": step,
        "model_state": model.state_dict(),
        "optimizer_state": optimizer.state_dict(),
        "torch_rng_state": torch.get_rng_state(),
    }, path)


def load_checkpoint(path) -> tuple[TinyTransformer, dict]:
    payload = torch.load(path, weights_only=False)
    model = TinyTransformer(ModelConfig(**payload["model_config"]))
    model.load_state_dict(payload["model_state"])
    model.eval()
    return model, payload


def train_loop(task: Task, difficulty: int, thought_type: str,
               model_config: ModelConfig | None = None,
               config: TrainConfig | None = None,
               out_dir=None, log=print) -> tuple[TinyTransformer, list[dict]]:
    """Train one model; returns it with its metric rows.

    Held-out accuracy is measured with the deduplicating evaluator on a
    test set drawn with an offset seed; training stops early once accuracy
    reaches the configured threshold.
    """
    from ..evaluator import evaluate_problems

    config = config or TrainConfig()
    torch.manual_seed(config.seed)
    model = TinyTransformer(model_config or ModelConfig())
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    rng = problem_rng(config.seed, task, difficulty)
    test_set = sample_problems(task, difficulty, config.eval_problems,
                               seed=config.seed + 1)
    out_dir = Path(out_dir) if out_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    metrics: list[dict] = []

    def evaluate(step: int, loss: float) -> float:
        report = evaluate_problems(model, test_set, thought_type=thought_type)
        row = {"step": step, "loss": loss, "lr": lr_at(config, step),
               "accuracy": report.accuracy}
        metrics.append(row)
        log(f"step {step}: loss {loss:.4f} accuracy {report.accuracy:.4f}")
        return report.accuracy

    loss = float("nan")
    for step in range(1, config.total_steps + 1):
        for group in optimizer.param_groups:
            group["lr"] = lr_at(config, step - 1)
        contexts, targets = make_batch(
            task, difficulty, thought_type, config.batch_size, rng,
            model.cfg.max_context)
        loss = train_step(model, optimizer, contexts, targets)
        if step % config.eval_interval == 0 or step == config.total_steps:
            accuracy = evaluate(step, loss)
            if out_dir is not None:
                save_checkpoint(out_dir / "checkpoint.pt", model, optimizer,
                                config, step)
                write_metrics(out_dir / "metrics.csv", metrics)
            if accuracy >= config.early_stop_accuracy:
                break
    return model, metrics


def write_metrics(path, metrics: list[dict]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["step", "loss", "lr", "accuracy"])
        writer.writeheader()
        writer.writerows(metrics)
