from rot_lab.problems import (
    Problem,
    Task,
    direct_answer,
    sample_problems,
)
from rot_lab.thoughts import Thought, recursive_answer, thought


def _p(task, *args):
    return Problem(task, tuple(args))


def test_addition_decomposition():
    assert thought(_p(Task.ADD, 8, 1)) == []
    assert thought(_p(Task.ADD, 408, 351)) == [
        Thought(_p(Task.ADD, 8, 1)),
        Thought(_p(Task.ADD, 40, 35)),
    ]
    # A carry inserts the +1 step before the rest is added.
    assert thought(_p(Task.ADD, 317, 65)) == [
        Thought(_p(Task.ADD, 7, 5)),
        Thought(_p(Task.ADD, 31, 1)),
        Thought(_p(Task.ADD, 32, 6)),
    ]


def test_subtraction_decomposition():
    assert thought(_p(Task.SUB, 19, 9)) == []
    # 10 is always borrowed for the last digit; here the borrow is unused,
    # so 1 is subtracted from the rest.
    assert thought(_p(Task.SUB, 432, 216)) == [
        Thought(_p(Task.SUB, 12, 6)),
        Thought(_p(Task.SUB, 43, 1)),
        Thought(_p(Task.SUB, 42, 21)),
    ]


def test_multiplication_decomposition():
    assert thought(_p(Task.MUL, 7, 0)) == []
    assert thought(_p(Task.MUL, 1, 99)) == []
    assert thought(_p(Task.MUL, 7, 8)) == []
    assert thought(_p(Task.MUL, 34, 5)) == [
        Thought(_p(Task.MUL, 4, 5)),
        Thought(_p(Task.MUL, 3, 5)),
        Thought(_p(Task.ADD, 150, 20), tail=True),
    ]
    assert thought(_p(Task.MUL, 43, 21)) == [
        Thought(_p(Task.MUL, 43, 1)),
        Thought(_p(Task.MUL, 43, 2)),
        Thought(_p(Task.ADD, 860, 43), tail=True),
    ]


def test_compare_and_division_decomposition():
    assert thought(_p(Task.COMPARE, 3, 9)) == []
    assert thought(_p(Task.COMPARE, 80, 9)) == []  # digit counts differ
    assert thought(_p(Task.COMPARE, 153, 159)) == [
        Thought(_p(Task.COMPARE, 1, 1)),
        Thought(_p(Task.COMPARE, 53, 59)),
    ]
    assert thought(_p(Task.DIV, 18, 29)) == [
        Thought(_p(Task.COMPARE, 18, 29)),
    ]
    assert thought(_p(Task.DIV, 76, 29)) == [
        Thought(_p(Task.COMPARE, 76, 29)),
        Thought(_p(Task.COMPARE, 76, 290)),
        Thought(_p(Task.SUB, 76, 29)),
        Thought(_p(Task.DIV, 47, 29)),
    ]
    # Dividend over ten times the divisor splits digit-wise instead.
    assert thought(_p(Task.DIV, 435, 2)) == [
        Thought(_p(Task.COMPARE, 435, 2)),
        Thought(_p(Task.COMPARE, 435, 20)),
        Thought(_p(Task.DIV, 43, 2)),
        Thought(_p(Task.DIV, 15, 2)),
    ]


def test_lcs_lps_decomposition():
    assert thought(_p(Task.LCS, "", "123")) == []
    assert thought(_p(Task.LCS, "123", "234")) == [
        Thought(_p(Task.EQUAL, "3", "4")),
        Thought(_p(Task.LCS, "12", "234")),
        Thought(_p(Task.LCS, "123", "23")),
        Thought(_p(Task.COMPARE, 1, 2)),
    ]
    assert thought(_p(Task.LCS, "123", "23")) == [
        Thought(_p(Task.EQUAL, "3", "3")),
        Thought(_p(Task.LCS, "12", "2")),
    ]
    assert thought(_p(Task.LPS, "3")) == []
    # The two-character base case passes the whole sequence through.
    assert thought(_p(Task.LPS, "23")) == [Thought(_p(Task.EQUAL, "23"))]
    assert thought(_p(Task.LPS, "232")) == [
        Thought(_p(Task.EQUAL, "2", "2")),
        Thought(_p(Task.LPS, "3")),
        Thought(_p(Task.ADD, 1, 2)),
    ]
    assert thought(_p(Task.LPS, "1232")) == [
        Thought(_p(Task.EQUAL, "1", "2")),
        Thought(_p(Task.LPS, "123")),
        Thought(_p(Task.LPS, "232")),
        Thought(_p(Task.COMPARE, 1, 3)),
    ]


def test_knapsack_decomposition():
    items = ((3, 9), (4, 2), (9, 5))
    assert thought(_p(Task.KNAPSACK, ((9, 5),), 1)) == [
        Thought(_p(Task.COMPARE, 5, 1)),
    ]
    assert thought(_p(Task.KNAPSACK, items, 10)) == [
        Thought(_p(Task.KNAPSACK, items[1:], 10)),
        Thought(_p(Task.COMPARE, 9, 10)),
        Thought(_p(Task.SUB, 10, 9)),
        Thought(_p(Task.KNAPSACK, items[1:], 1)),
        Thought(_p(Task.ADD, 0, 3)),
        Thought(_p(Task.COMPARE, 3, 13)),
    ]
    # An item heavier than the capacity skips the include branch.
    assert thought(_p(Task.KNAPSACK, ((5, 90), (7, 3)), 10)) == [
        Thought(_p(Task.KNAPSACK, ((7, 3),), 10)),
        Thought(_p(Task.COMPARE, 90, 10)),
    ]


def test_mcm_decomposition():
    mats = ((3, 9), (9, 4), (4, 5))
    assert thought(_p(Task.MCM, ((3, 9),), None, None)) == []
    thoughts = thought(_p(Task.MCM, mats, None, None))
    assert thoughts[:4] == [
        Thought(_p(Task.MCM, ((3, 9),), None, None)),
        Thought(_p(Task.MCM, ((9, 4), (4, 5)), None, None)),
        Thought(_p(Task.TERNARY_MUL, 3, 9, 5)),
        Thought(_p(Task.TERNARY_ADD, 0, 180, 135)),
    ]
    assert thoughts[4] == Thought(
        _p(Task.MCM, (((3, 9), (9, 4)), ((4, 5),)),
           ((3, 9), ((9, 4), (4, 5))), 315),
        tail=True)
    mid = thoughts[4].problem
    mid_thoughts = thought(mid)
    assert mid_thoughts[-1] == Thought(_p(Task.COMPARE, 168, 315))
    assert not any(th.tail for th in mid_thoughts)  # right group exhausted


def test_sort_and_merge_decomposition():
    assert thought(_p(Task.SORT, (5,))) == []
    assert thought(_p(Task.SORT, (3, 1, 2))) == [
        Thought(_p(Task.SORT, (3, 1))),
        Thought(_p(Task.SORT, (2,))),
        Thought(_p(Task.MERGE, (1, 3), (2,)), tail=True),
    ]
    assert thought(_p(Task.MERGE, (), (1, 2))) == []
    assert thought(_p(Task.MERGE, (1, 3), (2,))) == [
        Thought(_p(Task.COMPARE, 1, 2)),
        Thought(_p(Task.MERGE, (3,), (2,))),
    ]
    assert thought(_p(Task.MERGE, (3,), (2,))) == [
        Thought(_p(Task.COMPARE, 3, 2)),
    ]


def test_tail_calls_only_where_allowed():
    tail_tasks = {Task.MUL, Task.TERNARY_ADD, Task.TERNARY_MUL, Task.MCM,
                  Task.SORT}
    for task in Task:
        difficulty = {Task.SORT: 6, Task.MCM: 4, Task.KNAPSACK: 4,
                      Task.LCS: 6, Task.LPS: 8}.get(task, 4)
        for problem in sample_problems(task, difficulty, 50, seed=3):
            thoughts = thought(problem)
            tails = [i for i, th in enumerate(thoughts) if th.tail]
            if tails:
                assert task in tail_tasks
                assert tails == [len(thoughts) - 1]


def test_recursive_answer_matches_direct():
    for task in Task:
        difficulty = {Task.SORT: 8, Task.MCM: 4, Task.KNAPSACK: 5,
                      Task.LCS: 8, Task.LPS: 10, Task.MUL: 4,
                      Task.DIV: 4}.get(task, 6)
        for problem in sample_problems(task, difficulty, 300, seed=11):
            assert recursive_answer(problem) == direct_answer(problem), problem


def test_recursive_answer_base_cases():
    assert recursive_answer(_p(Task.ADD, 0, 0)) == 0
    assert recursive_answer(_p(Task.SUB, 19, 9)) == 10
    assert recursive_answer(_p(Task.MUL, 0, 12345)) == 0
    assert recursive_answer(_p(Task.MUL, 1, 12345)) == 12345
    assert recursive_answer(_p(Task.DIV, 5, 5)) == (1, 0)
    assert recursive_answer(_p(Task.DIV, 3, 8)) == (0, 3)
    assert recursive_answer(_p(Task.LPS, "7")) == ("7", 1)
    assert recursive_answer(_p(Task.LPS, "77")) == ("77", 2)
    assert recursive_answer(_p(Task.LPS, "76")) == ("7", 1)
    assert recursive_answer(_p(Task.LCS, "", "9")) == ("", 0)
    assert recursive_answer(_p(Task.MERGE, (1,), ())) == (1,)
    assert recursive_answer(_p(Task.SORT, (4,))) == (4,)
