"""Tiny decoder-only transformer over the token vocabulary."""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F
from torch.nn.attention import SDPBackend, sdpa_kernel

from .. import tokens as tk
from ..tokens import TokenSeq


@dataclass(frozen=True)
class ModelConfig:
    d_model: int = 128
    n_layers: int = 3
    n_heads: int = 4
    ffn_hidden: int = 256
    max_context: int = 512
    vocab_size: int = tk.VOCAB_SIZE
    dropout: float = 0.0

    def __post_init__(self):
        if self.d_model % self.n_heads:
            raise ValueError("d_model must be divisible by n_heads")


class _Block(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.ln1 = nn.LayerNorm(cfg.d_model)
        self.attn = nn.MultiheadAttention(
            cfg.d_model, cfg.n_heads, dropout=cfg.dropout, batch_first=True)
        self.ln2 = nn.LayerNorm(cfg.d_model)
        self.ffn = nn.Sequential(
            nn.Linear(cfg.d_model, cfg.ffn_hidden),
            nn.GELU(),
            nn.Linear(cfg.ffn_hidden, cfg.d_model),
        )
        self.drop = nn.Dropout(cfg.dropout)

    def forward(self, x: torch.Tensor, attn_mask: torch.Tensor) -> torch.Tensor:
        h = self.ln1(x)
        # The fused CPU attention kernel produces gradients inconsistent
        # with its forward pass for sequences of 16+ tokens; the math
        # backend is exact and fast enough at this model size.
        with sdpa_kernel([SDPBackend.MATH]):
            a, _ = self.attn(h, h, h, attn_mask=attn_mask, need_weights=False)
        x = x + self.drop(a)
        x = x + self.drop(self.ffn(self.ln2(x)))
        return x


class TinyTransformer(nn.Module):
    """Pre-norm decoder-only model with learned positional embeddings."""

    def __init__(self, cfg: ModelConfig | None = None):
        super().__init__()
        self.cfg = cfg = cfg or ModelConfig()
        self.max_context = cfg.max_context
        self.tok_emb = nn.Embedding(cfg.vocab_size, cfg.d_model)
        self.pos_emb = nn.Embedding(cfg.max_context, cfg.d_model)
        self.drop = nn.Dropout(cfg.dropout)
        self.blocks = nn.ModuleList(_Block(cfg) for _ in range(cfg.n_layers))
        self.ln_f = nn.LayerNorm(cfg.d_model)
        self.head = nn.Linear(cfg.d_model, cfg.vocab_size)
        self.apply(self._init_weights)

    @staticmethod
    def _init_weights(module: nn.Module) -> None:
        if isinstance(module, (nn.Linear, nn.Embedding)):
            nn.init.normal_(module.weight, mean=0.0, std=0.02)
            if isinstance(module, nn.Linear) and module.bias is not None:
                nn.init.zeros_(module.bias)

    def forward(self, tokens: torch.Tensor) -> torch.Tensor:
        """tokens [B, L] -> logits [B, L, vocab]."""
        b, length = tokens.shape
        if length > self.cfg.max_context:
            raise ValueError(
                f"context of {length} tokens exceeds {self.cfg.max_context}")
        pos = torch.arange(length, device=tokens.device)
        x = self.drop(self.tok_emb(tokens) + self.pos_emb(pos))
        mask = torch.full((length, length), float("-inf"), device=tokens.device)
        mask = torch.triu(mask, diagonal=1)
        for block in self.blocks:
            x = block(x, mask)
        return self.head(self.ln_f(x))

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    # Predictor interface -------------------------------------------------

    @torch.no_grad()
    def next_token(self, context: TokenSeq) -> int:
        self.eval()
        ids = torch.tensor([context], dtype=torch.long)
        logits = self.forward(ids)
        return int(logits[0, -1].argmax())

    @torch.no_grad()
    def predict_targets(self, context: TokenSeq) -> list[int]:
        """Greedy prediction at every position of a teacher-forced context.

        Entry i is the prediction after consuming context[:i]; entry 0 is a
        PAD placeholder.
        """
        self.eval()
        ids = torch.tensor([context[:-1]], dtype=torch.long)
        logits = self.forward(ids)
        return [tk.PAD] + logits[0].argmax(dim=-1).tolist()


def sequence_loss(model: TinyTransformer, contexts: torch.Tensor,
                  targets: torch.Tensor) -> torch.Tensor:
    """Next-token cross-entropy with PAD target positions excluded."""
    logits = model(contexts[:, :-1])
    labels = targets[:, 1:]
    return F.cross_entropy(
        logits.reshape(-1, logits.shape[-1]), labels.reshape(-1),
        ignore_index=tk.PAD)
