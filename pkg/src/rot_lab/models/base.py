"""Next-token predictor contract shared by the oracle and neural models."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from ..tokens import TokenSeq


@runtime_checkable
class Predictor(Protocol):
    """Deterministic next-token predictor.

    Implementations must be pure functions of the context and safe for
    concurrent read-only use.
    """

    max_context: int

    def next_token(self, context: TokenSeq) -> int:
        """Greedy next token for the given context."""
        ...
