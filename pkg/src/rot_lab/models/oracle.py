"""Ideal predictor that replays ground-truth contexts.

The oracle parses the question at the head of a context, reconstructs the
ground-truth context and target for that question, and emits the target
token at the current position.  It therefore behaves exactly like a model
perfectly trained on the generated data.
"""

from __future__ import annotations

import threading

from .. import tokens as tk
from ..contexts import build_rot_tree, parse_question
from ..tokens import TokenSeq


class OracleParseError(Exception):
    """Context is not a prefix of any reachable ground-truth context."""


class OracleModel:
    """Deterministic ground-truth next-token predictor."""

    def __init__(self, max_context: int = 1 << 30, verify_prefix: bool = True):
        self.max_context = max_context
        self.verify_prefix = verify_prefix
        self._pairs: dict[TokenSeq, tuple[TokenSeq, TokenSeq]] = {}
        self._nodes: dict = {}  # shared context-tree memo across questions
        self._lock = threading.Lock()

    def _pair(self, question: TokenSeq) -> tuple[TokenSeq, TokenSeq]:
        with self._lock:
            pair = self._pairs.get(question)
        if pair is None:
            try:
                problem = parse_question(question)
            except tk.ParseError as exc:
                raise OracleParseError(str(exc)) from exc
            with self._lock:
                root = build_rot_tree(problem, self._nodes)
                pair = (root.rendered, root.target)
                self._pairs[question] = pair
        return pair

    def next_token(self, context: TokenSeq) -> int:
        try:
            q_end = context.index(tk.EQUALS) + 1
        except ValueError:
            raise OracleParseError("context has no question terminator")
        x, y = self._pair(context[:q_end])
        i = len(context)
        if i >= len(x):
            raise OracleParseError("context ran past the ground-truth context")
        if self.verify_prefix and context != x[:i]:
            raise OracleParseError("context diverged from the ground truth")
        return y[i]

    def predict_targets(self, context: TokenSeq) -> list[int]:
        """Greedy prediction for every position of a teacher-forced context.

        Entry i is the token predicted after consuming context[:i]; entry 0
        is a PAD placeholder since there is no empty-context prediction.
        """
        q_end = context.index(tk.EQUALS) + 1
        x, y = self._pair(context[:q_end])
        if context != x:
            raise OracleParseError("context is not a ground-truth context")
        return [tk.PAD] + list(y[1:])
