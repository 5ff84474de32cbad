import pytest

from rot_lab import tokens as tk
from rot_lab.engine import (
    BudgetExceeded,
    ContextOverflow,
    DepthExceeded,
    InferenceLimits,
    ProtocolViolation,
    rot_infer,
)
from rot_lab.contexts import final_answer, render_question
from rot_lab.models.oracle import OracleModel
from rot_lab.problems import Problem, Task, sample_problems

from conftest import TapeModel, toks


def _p(task, *args):
    return Problem(task, tuple(args))


def _infer(problem, **kwargs):
    model = OracleModel()
    return rot_infer(model, render_question(problem), **kwargs)


def test_base_case_single_context():
    answer, trace = _infer(_p(Task.ADD, 8, 1))
    assert answer == toks("9 STOP")
    assert trace.contexts_created == 1
    assert trace.max_depth == 0
    assert trace.think_tokens == 0


def test_addition_trace():
    answer, trace = _infer(_p(Task.ADD, 408, 351))
    assert answer == toks("7 5 9 STOP")
    assert trace.contexts_created == 5
    assert trace.max_depth == 2
    assert trace.think_tokens == 4


def test_tail_recursion_trace():
    answer, trace = _infer(_p(Task.MUL, 34, 5))
    assert answer == toks("1 7 0 STOP")
    assert trace.contexts_created == 7
    # The tail context replaces its caller, so its own depth stays at the
    # caller's level and only its regular children go deeper.
    assert trace.max_depth == 2


def test_transcripts_record_finished_contexts():
    answer, trace = _infer(_p(Task.ADD, 408, 351), keep_transcripts=True)
    rendered = [tk.to_text(t) for t in trace.transcripts]
    assert "GO 8 + 1 = 9 STOP" in rendered
    assert rendered[-1].startswith("GO 4 0 8 + 3 5 1 =")
    d = trace.as_dict()
    assert d["contexts_created"] == 5
    assert d["transcripts"] == rendered


def test_engine_matches_ground_truth_across_tasks():
    cases = [
        (Task.ADD, 6), (Task.SUB, 6), (Task.MUL, 3), (Task.DIV, 3),
        (Task.COMPARE, 4), (Task.LCS, 5), (Task.LPS, 6),
        (Task.KNAPSACK, 3), (Task.MCM, 3), (Task.SORT, 5),
    ]
    model = OracleModel()
    for task, difficulty in cases:
        for problem in sample_problems(task, difficulty, 10, seed=21):
            answer, _ = rot_infer(model, render_question(problem))
            assert answer == final_answer(problem), problem


def test_cache_toggle_equivalence():
    # LCS("123","234") repeats the LCS("12","23") subquestion, so the
    # cache saves contexts without changing the answer.
    problem = _p(Task.LCS, "123", "234")
    with_cache, trace_on = _infer(problem, use_cache=True)
    without_cache, trace_off = _infer(problem, use_cache=False)
    assert with_cache == without_cache == final_answer(problem)
    assert trace_on.cache_hits > 0
    assert trace_off.cache_hits == 0
    assert trace_off.contexts_created > trace_on.contexts_created


def test_question_must_start_with_go():
    with pytest.raises(ValueError):
        rot_infer(OracleModel(), toks("8 + 1 ="))
    with pytest.raises(ValueError):
        rot_infer(OracleModel(), ())


def test_pad_emission_is_violation():
    model = TapeModel([tk.PAD])
    with pytest.raises(ProtocolViolation):
        rot_infer(model, toks("GO 8 + 1 ="))


def test_think_without_open_subquestion_is_violation():
    model = TapeModel([tk.THINK])
    with pytest.raises(ProtocolViolation):
        rot_infer(model, toks("GO 8 + 1 ="))


def test_depth_limit():
    # The model forever opens the same subquestion and recurses.
    model = TapeModel(toks("GO 1 + 1 = THINK"), cycle=True)
    limits = InferenceLimits(max_depth=5)
    with pytest.raises(DepthExceeded):
        rot_infer(model, toks("GO 8 + 1 ="), limits=limits, use_cache=False)


def test_context_overflow():
    model = TapeModel([tk.TEXT_TO_ID["1"]], cycle=True)
    limits = InferenceLimits(max_context_tokens=16)
    with pytest.raises(ContextOverflow):
        rot_infer(model, toks("GO 8 + 1 ="), limits=limits)


def test_token_budget():
    model = TapeModel([tk.TEXT_TO_ID["1"]], cycle=True)
    limits = InferenceLimits(max_total_tokens=10)
    with pytest.raises(BudgetExceeded):
        rot_infer(model, toks("GO 8 + 1 ="), limits=limits)


def test_overflow_on_splice():
    # The subanswer fits the child but the splice overflows the parent.
    problem = _p(Task.ADD, 408, 351)
    limits = InferenceLimits(max_context_tokens=20)
    with pytest.raises(ContextOverflow):
        _infer(problem, limits=limits)


def test_limits_validation():
    with pytest.raises(ValueError):
        InferenceLimits(max_context_tokens=0)


def test_determinism():
    first, trace_a = _infer(_p(Task.MCM, ((3, 9), (9, 4), (4, 5)), None, None))
    second, trace_b = _infer(_p(Task.MCM, ((3, 9), (9, 4), (4, 5)), None, None))
    assert first == second
    assert trace_a.as_dict() == trace_b.as_dict()


def test_tail_chain_depth_constant():
    # A long matrix chain produces a long tail chain; host depth must stay
    # far below the chain length.
    problem = sample_problems(Task.MCM, 6, 1, seed=2)[0]
    answer, trace = _infer(problem)
    assert answer == final_answer(problem)
    assert trace.max_depth <= 12
