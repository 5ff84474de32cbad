"""Multi-context recursive inference driven by control tokens.

The engine feeds a next-token predictor one context at a time.  The model
answers base questions directly, or emits GO/TAIL to open a subquestion
and THINK to request its answer.  Regular subanswers are spliced over the
THINK token; a tail subanswer is returned as the context's final answer.
Tail calls replace the current host frame instead of stacking a new one,
so arbitrarily long tail chains run in constant host depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tokens as tk
from .tokens import TokenSeq


class InferenceError(Exception):
    """Base class for inference failures."""


class ContextOverflow(InferenceError):
    """A context grew past the allowed token count."""


class DepthExceeded(InferenceError):
    """Recursion went deeper than the configured limit."""


class BudgetExceeded(InferenceError):
    """Total generated tokens exceeded the budget."""


class ProtocolViolation(InferenceError):
    """The model emitted a token the control protocol forbids."""


@dataclass(frozen=True)
class InferenceLimits:
    max_context_tokens: int = 2048
    max_depth: int = 256
    max_total_tokens: int = 10_000_000

    def __post_init__(self):
        if min(self.max_context_tokens, self.max_depth, self.max_total_tokens) <= 0:
            raise ValueError("all inference limits must be positive")


@dataclass
class RotTrace:
    contexts_created: int = 0
    max_depth: int = 0
    tokens_generated: int = 0
    think_tokens: int = 0
    cache_hits: int = 0
    transcripts: list[TokenSeq] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "contexts_created": self.contexts_created,
            "max_depth": self.max_depth,
            "tokens_generated": self.tokens_generated,
            "think_tokens": self.think_tokens,
            "cache_hits": self.cache_hits,
            "transcripts": [tk.to_text(t) for t in self.transcripts],
        }


class _Frame:
    __slots__ = ("ctx", "question", "i_ans", "i_go", "tail", "depth",
                 "also_answers")

    def __init__(self, question: TokenSeq, depth: int):
        self.ctx = list(question)
        self.question = question
        self.i_ans = len(question)
        self.i_go: int | None = None
        self.tail = False
        self.depth = depth
        # Questions of popped tail callers whose answer equals this
        # frame's answer; used to fill the cache on completion.
        self.also_answers: list[TokenSeq] = []


_MAX_TRANSCRIPTS = 256


def rot_infer(model, question: TokenSeq, limits: InferenceLimits | None = None,
              use_cache: bool = True, keep_transcripts: bool = False,
              ) -> tuple[TokenSeq, RotTrace]:
    """Run recursive inference on a question starting with GO.

    Returns the STOP-terminated answer and a trace of the run.  With
    use_cache, a repeated subquestion reuses the answer from its first
    solve; a deterministic model makes this behavior-preserving.
    """
    if not question or question[0] != tk.GO:
        raise ValueError("question must start with GO")
    if limits is None:
        limits = InferenceLimits()
    trace = RotTrace()
    cache: dict[TokenSeq, TokenSeq] = {}
    stack: list[_Frame] = []

    def push(q: TokenSeq, depth: int) -> None:
        if len(q) > limits.max_context_tokens:
            raise ContextOverflow(f"question of {len(q)} tokens over limit")
        if depth > limits.max_depth:
            raise DepthExceeded(f"depth {depth} over limit")
        stack.append(_Frame(q, depth))
        trace.contexts_created += 1
        trace.max_depth = max(trace.max_depth, depth)

    def deliver(answer: TokenSeq) -> TokenSeq | None:
        """Give a finished subanswer to the top frame (or finish the run)."""
        if not stack:
            return answer
        frame = stack[-1]
        frame.ctx.pop()  # the THINK placeholder
        frame.ctx.extend(answer)
        if len(frame.ctx) > limits.max_context_tokens:
            raise ContextOverflow(
                f"context grew to {len(frame.ctx)} tokens on splice")
        frame.i_ans = len(frame.ctx)
        return None

    def finish(frame: _Frame, answer: TokenSeq) -> TokenSeq | None:
        if use_cache:
            cache[frame.question] = answer
            for q in frame.also_answers:
                cache[q] = answer
        if keep_transcripts and len(trace.transcripts) < _MAX_TRANSCRIPTS:
            trace.transcripts.append(tuple(frame.ctx))
        return deliver(answer)

    push(question, 0)
    while True:
        frame = stack[-1]
        x = model.next_token(tuple(frame.ctx))
        trace.tokens_generated += 1
        if trace.tokens_generated > limits.max_total_tokens:
            raise BudgetExceeded(
                f"generated more than {limits.max_total_tokens} tokens")
        if x == tk.PAD:
            raise ProtocolViolation("model emitted PAD")
        frame.ctx.append(x)
        if x == tk.THINK:
            if frame.i_go is None:
                raise ProtocolViolation("THINK with no open GO/TAIL")
        elif len(frame.ctx) > limits.max_context_tokens:
            raise ContextOverflow(f"context grew past {limits.max_context_tokens}")

        if x == tk.STOP:
            answer = tuple(frame.ctx[frame.i_ans:])
            stack.pop()
            final = finish(frame, answer)
            if final is not None:
                return final, trace
        elif x == tk.GO:
            frame.i_go = len(frame.ctx) - 1
        elif x == tk.TAIL:
            frame.i_go = len(frame.ctx) - 1
            frame.tail = True
        elif x == tk.THINK:
            trace.think_tokens += 1
            sub_q = tuple(frame.ctx[frame.i_go:-1])
            # A tail question opens its child context as a regular one.
            if sub_q[0] == tk.TAIL:
                sub_q = (tk.GO,) + sub_q[1:]
            if frame.tail:
                # Trampoline: the child takes over this frame's slot; its
                # answer is also this frame's answer.
                stack.pop()
                if keep_transcripts and len(trace.transcripts) < _MAX_TRANSCRIPTS:
                    trace.transcripts.append(tuple(frame.ctx))
                cached = cache.get(sub_q) if use_cache else None
                if cached is not None:
                    trace.cache_hits += 1
                    if use_cache:
                        cache[frame.question] = cached
                        for q in frame.also_answers:
                            cache[q] = cached
                    final = deliver(cached)
                    if final is not None:
                        return final, trace
                else:
                    push(sub_q, frame.depth)
                    stack[-1].also_answers = (
                        frame.also_answers + [frame.question])
            else:
                cached = cache.get(sub_q) if use_cache else None
                if cached is not None:
                    trace.cache_hits += 1
                    final = deliver(cached)
                    if final is not None:
                        return final, trace
                else:
                    push(sub_q, frame.depth + 1)
