"""Recursive decomposition of problems into subproblem lists.

thought() maps a problem to its ordered list of direct subproblems, each
optionally flagged as a tail call (the last step whose answer is the
answer of the parent).  recursive_answer() recomputes answers purely by
composing subproblem answers, so it can be checked against the direct
reference answers in problems.py.
"""

from __future__ import annotations

from dataclasses import dataclass

from .problems import (
    ConfigurationError,
    Problem,
    Task,
    equal_chars,
    mcm_groups,
)


@dataclass(frozen=True)
class Thought:
    problem: Problem
    tail: bool = False


def _t(task: Task, args: tuple, tail: bool = False) -> Thought:
    return Thought(Problem(task, args), tail)


def thought(problem: Problem) -> list[Thought]:
    """Ordered direct subproblems of a problem; empty for leaf problems."""
    task, args = problem.task, problem.args
    if task is Task.ADD:
        return _add_thoughts(*args)
    if task is Task.SUB:
        return _sub_thoughts(*args)
    if task is Task.MUL:
        return _mul_thoughts(*args)
    if task is Task.DIV:
        return _div_thoughts(*args)
    if task is Task.COMPARE:
        return _compare_thoughts(*args)
    if task is Task.EQUAL:
        return []
    if task is Task.LCS:
        return _lcs_thoughts(*args)
    if task is Task.LPS:
        return _lps_thoughts(args[0])
    if task is Task.KNAPSACK:
        return _knapsack_thoughts(*args)
    if task is Task.TERNARY_ADD:
        a1, a2, a3 = args
        return [_t(Task.ADD, (a1, a2)), _t(Task.ADD, (a1 + a2, a3), tail=True)]
    if task is Task.TERNARY_MUL:
        a1, a2, a3 = args
        return [_t(Task.MUL, (a1, a2)), _t(Task.MUL, (a1 * a2, a3), tail=True)]
    if task is Task.MCM:
        return _mcm_thoughts(problem)
    if task is Task.SORT:
        return _merge_sort_thoughts(args[0])
    if task is Task.MERGE:
        return _merge_thoughts(*args)
    raise ConfigurationError(f"unsupported task {task}")


def _add_thoughts(left: int, right: int) -> list[Thought]:
    if left < 10 and right < 10:
        return []
    l_last, r_last = left % 10, right % 10
    thoughts = [_t(Task.ADD, (l_last, r_last))]
    l_rest, r_rest = left // 10, right // 10
    if l_last + r_last >= 10:
        thoughts.append(_t(Task.ADD, (l_rest, 1)))
        l_rest += 1
    if l_rest > 0 and r_rest > 0:
        thoughts.append(_t(Task.ADD, (l_rest, r_rest)))
    return thoughts


def _sub_thoughts(left: int, right: int) -> list[Thought]:
    if left <= 19 and right <= 9:
        return []
    # 10 is always borrowed for the last digit so the digit subtraction
    # never goes negative.
    l_last = left % 10 + 10
    r_last = right % 10
    thoughts = [_t(Task.SUB, (l_last, r_last))]
    l_rest, r_rest = left // 10, right // 10
    if l_last - r_last < 10:
        thoughts.append(_t(Task.SUB, (l_rest, 1)))
        l_rest -= 1
    if r_rest > 0:
        thoughts.append(_t(Task.SUB, (l_rest, r_rest)))
    return thoughts


def _mul_thoughts(left: int, right: int) -> list[Thought]:
    if left <= 1 or right <= 1:
        return []
    if left <= 9 and right <= 9:
        return []
    if right < 10:
        a1 = (left % 10) * right
        a2 = (left // 10) * right
        return [
            _t(Task.MUL, (left % 10, right)),
            _t(Task.MUL, (left // 10, right)),
            _t(Task.ADD, (a2 * 10, a1), tail=True),
        ]
    a1 = left * (right % 10)
    a2 = left * (right // 10)
    return [
        _t(Task.MUL, (left, right % 10)),
        _t(Task.MUL, (left, right // 10)),
        _t(Task.ADD, (a2 * 10, a1), tail=True),
    ]


def _compare_thoughts(left: int, right: int) -> list[Thought]:
    if left < 10 and right < 10:
        return []
    thoughts: list[Thought] = []
    if len(str(left)) == len(str(right)):
        l_first, r_first = int(str(left)[0]), int(str(right)[0])
        thoughts.append(_t(Task.COMPARE, (l_first, r_first)))
        if l_first == r_first:
            # Dropping the first digits may expose leading zeros; the int
            # conversion removes them.
            thoughts.append(
                _t(Task.COMPARE, (int(str(left)[1:]), int(str(right)[1:]))))
    return thoughts


def _div_thoughts(left: int, right: int) -> list[Thought]:
    thoughts = [_t(Task.COMPARE, (left, right))]
    if left <= right:
        return thoughts
    thoughts.append(_t(Task.COMPARE, (left, right * 10)))
    if left <= right * 10:
        thoughts.append(_t(Task.SUB, (left, right)))
        thoughts.append(_t(Task.DIV, (left - right, right)))
    else:
        thoughts.append(_t(Task.DIV, (left // 10, right)))
        left_remainder = (left // 10) % right * 10 + left % 10
        thoughts.append(_t(Task.DIV, (left_remainder, right)))
    return thoughts


def _lcs_thoughts(l: str, r: str) -> list[Thought]:
    if len(l) == 0 or len(r) == 0:
        return []
    thoughts = [_t(Task.EQUAL, (l[-1], r[-1]))]
    if l[-1] == r[-1]:
        thoughts.append(_t(Task.LCS, (l[:-1], r[:-1])))
        return thoughts
    _, len1 = recursive_answer(Problem(Task.LCS, (l[:-1], r)))
    _, len2 = recursive_answer(Problem(Task.LCS, (l, r[:-1])))
    thoughts.extend([
        _t(Task.LCS, (l[:-1], r)),
        _t(Task.LCS, (l, r[:-1])),
        _t(Task.COMPARE, (len1, len2)),
    ])
    return thoughts


def _lps_thoughts(s: str) -> list[Thought]:
    if len(s) == 1:
        return []
    if len(s) == 2:
        # The whole two-character sequence is passed through as a single
        # argument; rendering and answer match the two-argument form.
        return [_t(Task.EQUAL, (s,))]
    thoughts = [_t(Task.EQUAL, (s[0], s[-1]))]
    if s[0] == s[-1]:
        _, sub_len = recursive_answer(Problem(Task.LPS, (s[1:-1],)))
        thoughts.extend([
            _t(Task.LPS, (s[1:-1],)),
            _t(Task.ADD, (sub_len, 2)),
        ])
        return thoughts
    _, len1 = recursive_answer(Problem(Task.LPS, (s[:-1],)))
    _, len2 = recursive_answer(Problem(Task.LPS, (s[1:],)))
    thoughts.extend([
        _t(Task.LPS, (s[:-1],)),
        _t(Task.LPS, (s[1:],)),
        _t(Task.COMPARE, (len1, len2)),
    ])
    return thoughts


def _knapsack_thoughts(items: tuple, capacity: int) -> list[Thought]:
    value, weight = items[0]
    if len(items) == 1:
        return [_t(Task.COMPARE, (weight, capacity))]
    _, value_max = recursive_answer(Problem(Task.KNAPSACK, (items[1:], capacity)))
    thoughts = [
        _t(Task.KNAPSACK, (items[1:], capacity)),
        _t(Task.COMPARE, (weight, capacity)),
    ]
    if weight <= capacity:
        _, value_sub = recursive_answer(
            Problem(Task.KNAPSACK, (items[1:], capacity - weight)))
        thoughts.extend([
            _t(Task.SUB, (capacity, weight)),
            _t(Task.KNAPSACK, (items[1:], capacity - weight)),
            _t(Task.ADD, (value_sub, value)),
            _t(Task.COMPARE, (value_sub + value, value_max)),
        ])
    return thoughts


def _mcm_thoughts(problem: Problem) -> list[Thought]:
    mats, min_order, min_cost = problem.args
    if min_order is None and len(mats) == 1:
        return []
    l_mats, r_mats = mcm_groups(problem)
    l_order, l_cost = recursive_answer(Problem(Task.MCM, (l_mats, None, None)))
    r_order, r_cost = recursive_answer(Problem(Task.MCM, (r_mats, None, None)))
    agg_cost = l_mats[0][0] * r_mats[0][0] * r_mats[-1][1]
    thoughts = [
        _t(Task.MCM, (l_mats, None, None)),
        _t(Task.MCM, (r_mats, None, None)),
        _t(Task.TERNARY_MUL, (l_mats[0][0], r_mats[0][0], r_mats[-1][1])),
        _t(Task.TERNARY_ADD, (l_cost, r_cost, agg_cost)),
    ]
    cost = l_cost + r_cost + agg_cost
    if min_cost is not None:
        thoughts.append(_t(Task.COMPARE, (cost, min_cost)))
    if min_cost is None or cost < min_cost:
        min_cost = cost
        min_order = (l_order, r_order)
    if len(r_mats) > 1:
        new_split = (l_mats + (r_mats[0],), r_mats[1:])
        thoughts.append(
            _t(Task.MCM, (new_split, min_order, min_cost), tail=True))
    return thoughts


def _merge_thoughts(l: tuple, r: tuple) -> list[Thought]:
    if len(l) == 0 or len(r) == 0:
        return []
    thoughts = [_t(Task.COMPARE, (l[0], r[0]))]
    if l[0] < r[0] and len(l) > 1:
        thoughts.append(_t(Task.MERGE, (l[1:], r)))
    elif l[0] >= r[0] and len(r) > 1:
        thoughts.append(_t(Task.MERGE, (l, r[1:])))
    return thoughts


def _merge_sort_thoughts(terms: tuple) -> list[Thought]:
    if len(terms) < 2:
        return []
    l_len = (len(terms) + 1) // 2
    l, r = terms[:l_len], terms[l_len:]
    return [
        _t(Task.SORT, (l,)),
        _t(Task.SORT, (r,)),
        _t(Task.MERGE, (tuple(sorted(l)), tuple(sorted(r))), tail=True),
    ]


# ---------------------------------------------------------------------------
# Answers by recursive composition
# ---------------------------------------------------------------------------

_ANSWER_CACHE: dict[Problem, object] = {}


def recursive_answer(problem: Problem):
    """Answer assembled from subproblem answers, mirroring thought()."""
    cached = _ANSWER_CACHE.get(problem)
    if cached is not None:
        return cached
    answer = _recursive_answer(problem)
    _ANSWER_CACHE[problem] = answer
    return answer


def _rec(task: Task, args: tuple):
    return recursive_answer(Problem(task, args))


def _recursive_answer(problem: Problem):
    task, args = problem.task, problem.args
    if task is Task.ADD:
        return _add_answer(*args)
    if task is Task.SUB:
        return _sub_answer(*args)
    if task is Task.MUL:
        return _mul_answer(*args)
    if task is Task.DIV:
        return _div_answer(*args)
    if task is Task.COMPARE:
        return _compare_answer(*args)
    if task is Task.EQUAL:
        x, y = equal_chars(problem)
        return x == y
    if task is Task.LCS:
        return _lcs_answer(*args)
    if task is Task.LPS:
        return _lps_answer(args[0])
    if task is Task.KNAPSACK:
        return _knapsack_answer(*args)
    if task is Task.TERNARY_ADD:
        return _rec(Task.ADD, (_rec(Task.ADD, args[:2]), args[2]))
    if task is Task.TERNARY_MUL:
        return _rec(Task.MUL, (_rec(Task.MUL, args[:2]), args[2]))
    if task is Task.MCM:
        return _mcm_answer(problem)
    if task is Task.SORT:
        return _merge_sort_answer(args[0])
    if task is Task.MERGE:
        return _merge_answer(*args)
    raise ConfigurationError(f"unsupported task {task}")


def _add_answer(left: int, right: int) -> int:
    if left < 10 and right < 10:
        return left + right
    last = _rec(Task.ADD, (left % 10, right % 10))
    l_rest, r_rest = left // 10, right // 10
    if last >= 10:
        l_rest = _rec(Task.ADD, (l_rest, 1))
    if l_rest > 0 and r_rest > 0:
        rest = _rec(Task.ADD, (l_rest, r_rest))
    else:
        rest = l_rest + r_rest
    return rest * 10 + last % 10


def _sub_answer(left: int, right: int) -> int:
    if left <= 19 and right <= 9:
        return left - right
    last = _rec(Task.SUB, (left % 10 + 10, right % 10))
    l_rest, r_rest = left // 10, right // 10
    if last < 10:
        l_rest = _rec(Task.SUB, (l_rest, 1))
    rest = _rec(Task.SUB, (l_rest, r_rest)) if r_rest > 0 else l_rest
    return rest * 10 + last % 10


def _mul_answer(left: int, right: int) -> int:
    if left <= 1 or right <= 1:
        return left * right
    if left <= 9 and right <= 9:
        return left * right
    if right < 10:
        a1 = _rec(Task.MUL, (left % 10, right))
        a2 = _rec(Task.MUL, (left // 10, right))
    else:
        a1 = _rec(Task.MUL, (left, right % 10))
        a2 = _rec(Task.MUL, (left, right // 10))
    return _rec(Task.ADD, (a2 * 10, a1))


def _compare_answer(left: int, right: int) -> str:
    if left < 10 and right < 10:
        return "LT" if left < right else ("GT" if left > right else "EQ")
    digit_l, digit_r = len(str(left)), len(str(right))
    if digit_l != digit_r:
        return "LT" if digit_l < digit_r else "GT"
    first = _rec(Task.COMPARE, (int(str(left)[0]), int(str(right)[0])))
    if first != "EQ":
        return first
    return _rec(Task.COMPARE, (int(str(left)[1:]), int(str(right)[1:])))


def _div_answer(left: int, right: int) -> tuple[int, int]:
    order = _rec(Task.COMPARE, (left, right))
    if order == "LT":
        return (0, left)
    if order == "EQ":
        return (1, 0)
    if _rec(Task.COMPARE, (left, right * 10)) != "GT":
        diff = _rec(Task.SUB, (left, right))
        q, r = _rec(Task.DIV, (diff, right))
        return (q + 1, r)
    q1, r1 = _rec(Task.DIV, (left // 10, right))
    q2, r2 = _rec(Task.DIV, (r1 * 10 + left % 10, right))
    return (q1 * 10 + q2, r2)


def _lcs_answer(l: str, r: str) -> tuple[str, int]:
    if len(l) == 0 or len(r) == 0:
        return ("", 0)
    if _rec(Task.EQUAL, (l[-1], r[-1])):
        sub, _ = _rec(Task.LCS, (l[:-1], r[:-1]))
        return (sub + l[-1], len(sub) + 1)
    lcs1 = _rec(Task.LCS, (l[:-1], r))
    lcs2 = _rec(Task.LCS, (l, r[:-1]))
    order = _rec(Task.COMPARE, (lcs1[1], lcs2[1]))
    return lcs2 if order == "LT" else lcs1


def _lps_answer(s: str) -> tuple[str, int]:
    if len(s) == 1:
        return (s, 1)
    if len(s) == 2:
        return (s, 2) if _rec(Task.EQUAL, (s,)) else (s[0], 1)
    if _rec(Task.EQUAL, (s[0], s[-1])):
        sub, sub_len = _rec(Task.LPS, (s[1:-1],))
        length = _rec(Task.ADD, (sub_len, 2))
        return (s[0] + sub + s[-1], length)
    lps1 = _rec(Task.LPS, (s[:-1],))
    lps2 = _rec(Task.LPS, (s[1:],))
    order = _rec(Task.COMPARE, (lps1[1], lps2[1]))
    return lps2 if order == "LT" else lps1


def _knapsack_answer(items: tuple, capacity: int):
    value, weight = items[0]
    if len(items) == 1:
        order = _rec(Task.COMPARE, (weight, capacity))
        return (items, value) if order != "GT" else ((), 0)
    items_max, value_max = _rec(Task.KNAPSACK, (items[1:], capacity))
    order = _rec(Task.COMPARE, (weight, capacity))
    if order != "GT":
        rest = _rec(Task.SUB, (capacity, weight))
        items_sub, value_sub = _rec(Task.KNAPSACK, (items[1:], rest))
        value_incl = _rec(Task.ADD, (value_sub, value))
        if _rec(Task.COMPARE, (value_incl, value_max)) == "GT":
            return ((items[0],) + items_sub, value_incl)
    return (items_max, value_max)


def _mcm_answer(problem: Problem):
    mats, min_order, min_cost = problem.args
    if min_order is None and len(mats) == 1:
        return (mats[0], 0)
    l_mats, r_mats = mcm_groups(problem)
    l_order, l_cost = _rec(Task.MCM, (l_mats, None, None))
    r_order, r_cost = _rec(Task.MCM, (r_mats, None, None))
    agg_cost = _rec(
        Task.TERNARY_MUL, (l_mats[0][0], r_mats[0][0], r_mats[-1][1]))
    cost = _rec(Task.TERNARY_ADD, (l_cost, r_cost, agg_cost))
    if min_cost is None or _rec(Task.COMPARE, (cost, min_cost)) == "LT":
        min_cost = cost
        min_order = (l_order, r_order)
    if len(r_mats) > 1:
        new_split = (l_mats + (r_mats[0],), r_mats[1:])
        return _rec(Task.MCM, (new_split, min_order, min_cost))
    return (min_order, min_cost)


def _merge_answer(l: tuple, r: tuple):
    if len(l) == 0 or len(r) == 0:
        return l + r
    if _rec(Task.COMPARE, (l[0], r[0])) == "LT":
        rest = _rec(Task.MERGE, (l[1:], r)) if len(l) > 1 else r
        return (l[0],) + rest
    rest = _rec(Task.MERGE, (l, r[1:])) if len(r) > 1 else l
    return (r[0],) + rest


def _merge_sort_answer(terms: tuple):
    if len(terms) < 2:
        return tuple(terms)
    l_len = (len(terms) + 1) // 2
    sorted_l = _rec(Task.SORT, (terms[:l_len],))
    sorted_r = _rec(Task.SORT, (terms[l_len:],))
    return _rec(Task.MERGE, (sorted_l, sorted_r))
