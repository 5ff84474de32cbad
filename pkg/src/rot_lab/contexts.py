"""Token rendering of problems and construction of reasoning contexts.

A context is the token sequence [Q; (Qsub, Asub)...; A].  Regular
subquestions start with GO and are followed by their answer; a tail
subquestion starts with TAIL and the context ends with a THINK token,
because the subproblem's answer is the context's final answer.  The
matching target sequence masks the question with PAD and replaces each
sub-answer with THINK plus padding, so only tokens the model must produce
carry loss.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from . import tokens as tk
from .problems import Problem, Task, equal_chars, mcm_groups
from .thoughts import Thought, recursive_answer, thought

TokenSeq = tk.TokenSeq

_ARITH_OP = {
    Task.ADD: tk.PLUS,
    Task.SUB: tk.MINUS,
    Task.MUL: tk.STAR,
    Task.DIV: tk.DIVIDE,
    Task.COMPARE: tk.VS,
}
_TERNARY_OP = {Task.TERNARY_ADD: tk.PLUS, Task.TERNARY_MUL: tk.STAR}
_ORDER_TOKEN = {"LT": tk.LT, "EQ": tk.EQ, "GT": tk.GT}


def _chars(s: str) -> TokenSeq:
    return tuple(tk.TEXT_TO_ID[c] for c in s)


def _join(parts: list[TokenSeq], sep: int) -> TokenSeq:
    out: list[int] = []
    for i, part in enumerate(parts):
        if i:
            out.append(sep)
        out.extend(part)
    return tuple(out)


def _render_items(items: tuple) -> TokenSeq:
    return _join(
        [tk.render_number(v) + (tk.AMP,) + tk.render_number(w) for v, w in items],
        tk.COMMA)


def _render_matrices(mats: tuple) -> TokenSeq:
    return _join(
        [tk.render_number(r) + (tk.TIMES,) + tk.render_number(c) for r, c in mats],
        tk.COMMA)


def _render_numbers(nums: tuple) -> TokenSeq:
    return _join([tk.render_number(n) for n in nums], tk.COMMA)


def _is_matrix(order) -> bool:
    return isinstance(order[0], int)


def _render_order(order) -> TokenSeq:
    """Parenthesization as tokens: composite subgroups get parentheses."""
    if _is_matrix(order):
        return tk.render_number(order[0]) + (tk.TIMES,) + tk.render_number(order[1])
    sides = []
    for side in order:
        rendered = _render_order(side)
        if not _is_matrix(side):
            rendered = (tk.LPAREN,) + rendered + (tk.RPAREN,)
        sides.append(rendered)
    return _join(sides, tk.COMMA)


def render_question(problem: Problem) -> TokenSeq:
    """[GO; question body; =]"""
    task, args = problem.task, problem.args
    if task in _ARITH_OP:
        body = (tk.render_number(args[0]) + (_ARITH_OP[task],)
                + tk.render_number(args[1]))
    elif task is Task.EQUAL:
        x, y = equal_chars(problem)
        body = (tk.EQUAL_T,) + _chars(x) + (tk.COMMA,) + _chars(y)
    elif task is Task.LCS:
        body = _chars(args[0]) + (tk.LCS_T,) + _chars(args[1])
    elif task is Task.LPS:
        body = (tk.LPS_T,) + _chars(args[0])
    elif task is Task.KNAPSACK:
        body = ((tk.KNAPSACK_T,) + _render_items(args[0]) + (tk.AT,)
                + tk.render_number(args[1]))
    elif task in _TERNARY_OP:
        op = _TERNARY_OP[task]
        body = _join([tk.render_number(a) for a in args], op)
    elif task is Task.MCM:
        mats, min_order, min_cost = args
        if min_order is None:
            body = (tk.MCM_T,) + _render_matrices(mats)
        else:
            l_mats, r_mats = mats
            body = ((tk.MCM_T,) + _render_matrices(l_mats) + (tk.BAR,)
                    + _render_matrices(r_mats) + (tk.ACC_T,)
                    + _render_order(min_order) + (tk.SEMICOLON,)
                    + tk.render_number(min_cost))
    elif task is Task.SORT:
        body = (tk.SORT_T,) + _render_numbers(args[0])
    elif task is Task.MERGE:
        body = ((tk.MERGE_T,) + _render_numbers(args[0]) + (tk.BAR,)
                + _render_numbers(args[1]))
    else:
        raise ValueError(f"unsupported task {task}")
    return (tk.GO,) + body + (tk.EQUALS,)


def render_answer(problem: Problem) -> TokenSeq:
    """Answer tokens, STOP-terminated."""
    task = problem.task
    answer = recursive_answer(problem)
    if task in (Task.ADD, Task.SUB, Task.MUL, Task.TERNARY_ADD, Task.TERNARY_MUL):
        body = tk.render_number(answer)
    elif task is Task.DIV:
        q, r = answer
        body = tk.render_number(q) + (tk.REMAINDER,) + tk.render_number(r)
    elif task is Task.COMPARE:
        body = (_ORDER_TOKEN[answer],)
    elif task is Task.EQUAL:
        body = (tk.TRUE_T if answer else tk.FALSE_T,)
    elif task in (Task.LCS, Task.LPS):
        s, length = answer
        body = _chars(s) + (tk.SEMICOLON,) + tk.render_number(length)
    elif task is Task.KNAPSACK:
        items, value = answer
        body = _render_items(items) + (tk.DOLLAR,) + tk.render_number(value)
    elif task is Task.MCM:
        order, cost = answer
        body = _render_order(order) + (tk.SEMICOLON,) + tk.render_number(cost)
    elif task in (Task.SORT, Task.MERGE):
        body = _render_numbers(answer)
    else:
        raise ValueError(f"unsupported task {task}")
    return body + (tk.STOP,)


# ---------------------------------------------------------------------------
# Context trees
# ---------------------------------------------------------------------------

@dataclass
class Context:
    """One reasoning context: question, subproblem pairs, own answer.

    final_answer is the answer a solver ultimately produces for the
    problem; answer is the context's own trailing answer segment, which is
    empty when the context ends in a tail call (the tail child's final
    answer takes its place).
    """

    problem: Problem
    question: TokenSeq
    final_answer: TokenSeq
    pairs: list[tuple[Thought, "Context"]] = field(default_factory=list)
    answer: TokenSeq = ()
    rendered: TokenSeq = ()
    target: TokenSeq = ()

    @property
    def has_tail(self) -> bool:
        return bool(self.pairs) and self.pairs[-1][0].tail


def _render_context(ctx: Context) -> TokenSeq:
    out = list(ctx.question)
    for th, child in ctx.pairs:
        if th.tail:
            out.append(tk.TAIL)
            out.extend(child.question[1:])
            out.append(tk.THINK)
        else:
            out.extend(child.question)
            out.extend(child.final_answer)
    out.extend(ctx.answer)
    return tuple(out)


def _build_target(ctx: Context) -> TokenSeq:
    out: list[int] = [tk.PAD] * len(ctx.question)
    for th, child in ctx.pairs:
        if th.tail:
            out.append(tk.TAIL)
            out.extend(child.question[1:])
            out.append(tk.THINK)
        else:
            out.extend(child.question)
            out.append(tk.THINK)
            out.extend([tk.PAD] * (len(child.final_answer) - 1))
    out.extend(ctx.answer)
    return tuple(out)


def build_rot_tree(problem: Problem,
                   nodes: dict[Problem, Context] | None = None) -> Context:
    """Full context tree with shared nodes for repeated subproblems.

    Construction is iterative so that deep tail chains cannot overflow the
    host call stack.  Passing a nodes dict reuses subtrees across calls.
    """
    if nodes is None:
        nodes = {}
    stack: list[Problem] = [problem]
    while stack:
        p = stack[-1]
        node = nodes.get(p)
        if node is None:
            node = Context(p, render_question(p), render_answer(p))
            nodes[p] = node
            missing = [th.problem for th in thought(p)
                       if th.problem not in nodes or not nodes[th.problem].rendered]
            if missing:
                stack.extend(reversed(missing))
                continue
        stack.pop()
        if node.rendered:
            continue
        node.pairs = [(th, nodes[th.problem]) for th in thought(p)]
        if not node.has_tail:
            node.answer = node.final_answer
        node.rendered = _render_context(node)
        node.target = _build_target(node)
    return nodes[problem]


def final_answer(problem: Problem) -> TokenSeq:
    """The STOP-terminated final answer a solver must produce."""
    return render_answer(problem)


def iter_contexts(root: Context, dedup: bool = True) -> Iterator[Context]:
    """Depth-first preorder walk; with dedup, repeated problems are skipped.

    The dedup order matches the context numbering used in worked examples.
    """
    seen: set[Problem] = set()
    stack: list[Context] = [root]
    while stack:
        ctx = stack.pop()
        if dedup:
            if ctx.problem in seen:
                continue
            seen.add(ctx.problem)
        yield ctx
        stack.extend(child for _, child in reversed(ctx.pairs))


def rollout_contexts(problem: Problem) -> list[Context]:
    """Unique contexts of a problem in discovery order."""
    return list(iter_contexts(build_rot_tree(problem)))


def unique_training_pairs(problem: Problem) -> list[tuple[TokenSeq, TokenSeq]]:
    """Unique (context, target) pairs, deduplicated by rendered tokens."""
    seen: set[TokenSeq] = set()
    pairs = []
    for ctx in rollout_contexts(problem):
        if ctx.rendered in seen:
            continue
        seen.add(ctx.rendered)
        pairs.append((ctx.rendered, ctx.target))
    return pairs


def sample_training_context(problem: Problem, rng) -> tuple[TokenSeq, TokenSeq]:
    """One training example: a uniform draw over the problem's unique contexts."""
    pairs = unique_training_pairs(problem)
    return pairs[int(rng.integers(0, len(pairs)))]


def build_wt_pair(problem: Problem) -> tuple[TokenSeq, TokenSeq]:
    return render_question(problem), render_answer(problem)


def wt_training_pair(problem: Problem) -> tuple[TokenSeq, TokenSeq]:
    """(context, target) for direct question-to-answer training."""
    question, answer = build_wt_pair(problem)
    return question + answer, (tk.PAD,) * len(question) + answer


def build_cot_context(problem: Problem) -> TokenSeq:
    """Single flat sequence with every reasoning step inlined in place."""
    root = build_rot_tree(problem)
    out: list[int] = []
    # Work items: (context, is_tail, emitted) -- emitted marks the return
    # visit where the context's own answer is appended.
    work: list[tuple[Context, bool, bool]] = [(root, False, False)]
    while work:
        ctx, is_tail, emitted = work.pop()
        if emitted:
            out.extend(ctx.answer)
            continue
        out.append(tk.TAIL if is_tail else tk.GO)
        out.extend(ctx.question[1:])
        work.append((ctx, is_tail, True))
        for th, child in reversed(ctx.pairs):
            work.append((child, th.tail, False))
    return tuple(out)


# ---------------------------------------------------------------------------
# Token accounting
# ---------------------------------------------------------------------------

def generated_tokens(ctx: Context) -> int:
    """Tokens the model emits for one context, THINK excluded.

    Sub-answers are spliced in by the framework, not emitted, so the count
    is the subquestion lengths plus the context's own answer.  A tail
    question has the same length as its child's question (TAIL for GO).
    """
    return sum(len(child.question) for _, child in ctx.pairs) + len(ctx.answer)


def cot_generated_tokens(problem: Problem) -> int:
    """Length of the CoT sequence past the question."""
    return len(build_cot_context(problem)) - len(render_question(problem))


def rot_generated_tokens(problem: Problem, dedup: bool = False) -> int:
    """Total emitted tokens over the whole tree, THINK excluded.

    Without dedup every repeated subcontext is counted each time it would
    be solved; with dedup each unique context is counted once (the effect
    of caching repeated computations).
    """
    root = build_rot_tree(problem)
    if dedup:
        return sum(generated_tokens(c) for c in iter_contexts(root))
    totals: dict[Problem, int] = {}
    stack = [root]
    while stack:
        ctx = stack[-1]
        if ctx.problem in totals:
            stack.pop()
            continue
        missing = [c for _, c in ctx.pairs if c.problem not in totals]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        totals[ctx.problem] = generated_tokens(ctx) + sum(
            totals[c.problem] for _, c in ctx.pairs)
    return totals[root.problem]


def rot_context_lengths(problem: Problem) -> list[int]:
    return [len(c.rendered) for c in rollout_contexts(problem)]


# ---------------------------------------------------------------------------
# Question parsing (inverse of render_question)
# ---------------------------------------------------------------------------

def _split(seq: TokenSeq, sep: int) -> list[TokenSeq]:
    parts: list[list[int]] = [[]]
    for t in seq:
        if t == sep:
            parts.append([])
        else:
            parts[-1].append(t)
    return [tuple(p) for p in parts]


def _parse_string(seq: TokenSeq) -> str:
    return "".join(tk.ID_TO_TEXT[t] for t in seq)


def _parse_items(seq: TokenSeq) -> tuple:
    items = []
    for part in _split(seq, tk.COMMA):
        v, w = _split(part, tk.AMP)
        items.append((tk.parse_number(v), tk.parse_number(w)))
    return tuple(items)


def _parse_matrices(seq: TokenSeq) -> tuple:
    mats = []
    for part in _split(seq, tk.COMMA):
        r, c = _split(part, tk.TIMES)
        mats.append((tk.parse_number(r), tk.parse_number(c)))
    return tuple(mats)


def _parse_numbers(seq: TokenSeq) -> tuple:
    if not seq:
        return ()
    return tuple(tk.parse_number(p) for p in _split(seq, tk.COMMA))


def _parse_order(seq: TokenSeq, pos: int = 0):
    """order := elem ("," elem)*; elem := r×c | "(" order ")" """
    elems = []
    while pos < len(seq):
        if seq[pos] == tk.LPAREN:
            depth, end = 1, pos + 1
            while depth:
                if seq[end] == tk.LPAREN:
                    depth += 1
                elif seq[end] == tk.RPAREN:
                    depth -= 1
                end += 1
            elems.append(_parse_order(seq[pos + 1:end - 1]))
            pos = end
        else:
            end = pos
            while end < len(seq) and seq[end] not in (tk.COMMA, tk.LPAREN):
                end += 1
            r, c = _split(seq[pos:end], tk.TIMES)
            elems.append((tk.parse_number(r), tk.parse_number(c)))
            pos = end
        if pos < len(seq) and seq[pos] == tk.COMMA:
            pos += 1
    return elems[0] if len(elems) == 1 else tuple(elems)


def parse_question(question: TokenSeq) -> Problem:
    """Inverse of render_question; raises ParseError on malformed input."""
    if len(question) < 3 or question[0] != tk.GO or question[-1] != tk.EQUALS:
        raise tk.ParseError("question must be [GO; body; =]")
    body = question[1:-1]
    head = body[0]
    if head == tk.EQUAL_T:
        x, y = _split(body[1:], tk.COMMA)
        return Problem(Task.EQUAL, (_parse_string(x), _parse_string(y)))
    if head == tk.LPS_T:
        return Problem(Task.LPS, (_parse_string(body[1:]),))
    if head == tk.KNAPSACK_T:
        items, cap = _split(body[1:], tk.AT)
        return Problem(Task.KNAPSACK, (_parse_items(items), tk.parse_number(cap)))
    if head == tk.MCM_T:
        rest = body[1:]
        if tk.BAR in rest:
            groups, acc = _split(rest, tk.ACC_T)
            l_mats, r_mats = _split(groups, tk.BAR)
            order_seq, cost = _split(acc, tk.SEMICOLON)
            return Problem(Task.MCM, (
                (_parse_matrices(l_mats), _parse_matrices(r_mats)),
                _parse_order(order_seq), tk.parse_number(cost)))
        return Problem(Task.MCM, (_parse_matrices(rest), None, None))
    if head == tk.SORT_T:
        return Problem(Task.SORT, (_parse_numbers(body[1:]),))
    if head == tk.MERGE_T:
        l, r = _split(body[1:], tk.BAR)
        return Problem(Task.MERGE, (_parse_numbers(l), _parse_numbers(r)))
    if tk.LCS_T in body:
        l, r = _split(body, tk.LCS_T)
        return Problem(Task.LCS, (_parse_string(l), _parse_string(r)))
    for op_token, task in ((tk.VS, Task.COMPARE), (tk.DIVIDE, Task.DIV),
                           (tk.MINUS, Task.SUB)):
        if op_token in body:
            a, b = _split(body, op_token)
            return Problem(task, (tk.parse_number(a), tk.parse_number(b)))
    for op_token, binary, ternary in ((tk.PLUS, Task.ADD, Task.TERNARY_ADD),
                                      (tk.STAR, Task.MUL, Task.TERNARY_MUL)):
        if op_token in body:
            parts = _split(body, op_token)
            if len(parts) == 2:
                return Problem(binary, tuple(tk.parse_number(p) for p in parts))
            if len(parts) == 3:
                return Problem(ternary, tuple(tk.parse_number(p) for p in parts))
            raise tk.ParseError(f"bad operand count {len(parts)}")
    raise tk.ParseError(f"unrecognized question {tk.to_text(question)!r}")


# ---------------------------------------------------------------------------
# Dataset serialization
# ---------------------------------------------------------------------------

def write_dataset(path, problems: list[Problem], thought_type: str) -> int:
    """JSONL dataset: one record per unique context (rot), flat context
    (cot), or question/answer pair (wt).  Returns the record count."""
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for p in problems:
            meta = {"task": p.task.value}
            if thought_type == "rot":
                for ctx, target in unique_training_pairs(p):
                    record = {"context": tk.to_text(ctx),
                              "target": tk.to_text(target), **meta}
                    f.write(json.dumps(record, ensure_ascii=False) + "\n")
                    count += 1
            elif thought_type == "cot":
                cot = build_cot_context(p)
                q_len = len(render_question(p))
                target = (tk.PAD,) * q_len + cot[q_len:]
                record = {"context": tk.to_text(cot),
                          "target": tk.to_text(target), **meta}
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
                count += 1
            elif thought_type == "wt":
                ctx, target = wt_training_pair(p)
                record = {"context": tk.to_text(ctx),
                          "target": tk.to_text(target), **meta}
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
                count += 1
            else:
                raise ValueError(f"unknown thought type {thought_type!r}")
    return count
