"""Shared helpers for the test suite."""

import numpy as np
import pytest

from rot_lab import tokens as tk


def toks(text: str) -> tk.TokenSeq:
    """Token ids from space-separated token text."""
    return tk.from_text(text)


def text(tokens) -> str:
    return tk.to_text(tokens)


class TapeModel:
    """Emits a fixed token sequence regardless of context."""

    max_context = 1 << 30

    def __init__(self, tape, cycle=False):
        self.tape = list(tape)
        self.cycle = cycle
        self.pos = 0

    def next_token(self, context):
        token = self.tape[self.pos % len(self.tape)]
        self.pos += 1
        if not self.cycle and self.pos > len(self.tape):
            raise AssertionError("tape exhausted")
        return token


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
