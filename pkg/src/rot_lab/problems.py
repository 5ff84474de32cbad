"""Problem instances, samplers, and direct (non-recursive) reference answers.

Sampling follows an extended log-uniform distribution U_log(alpha, beta,
delta): draw r uniformly in [log(alpha+delta), log(beta+delta)] and return
floor(exp(r) - delta), clamped into [alpha, beta).  Streams are driven by
numpy's PCG64 with a SeedSequence spawn key of (task id, difficulty), so a
dataset is bit-reproducible from (seed, task, difficulty, count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np


class Task(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    COMPARE = "compare"
    EQUAL = "equal"
    LCS = "lcs"
    LPS = "lps"
    KNAPSACK = "knapsack"
    TERNARY_ADD = "ternary_add"
    TERNARY_MUL = "ternary_mul"
    MCM = "mcm"
    SORT = "sort"
    MERGE = "merge"


# Tasks an operator can request from the CLI / sampler directly.  The rest
# arise only as subproblems (Compare, Equal, ternaries, Merge, mid-state MCM)
# but still have sampling conventions so they can be tested standalone.
PRIMARY_TASKS = (
    Task.ADD, Task.SUB, Task.MUL, Task.DIV, Task.LCS, Task.LPS,
    Task.KNAPSACK, Task.MCM, Task.SORT,
)

_TASK_ID = {task: i for i, task in enumerate(Task)}


@dataclass(frozen=True)
class Problem:
    """One (sub)problem instance; args are task-specific nested tuples."""

    task: Task
    args: tuple

    def __repr__(self) -> str:  # compact, e.g. Problem(add, (408, 351))
        return f"Problem({self.task.value}, {self.args!r})"


class ConfigurationError(ValueError):
    """Invalid sampler or run configuration."""


@dataclass(frozen=True)
class LogUniformParams:
    alpha: int
    beta: int
    delta: float

    def __post_init__(self):
        if self.alpha >= self.beta:
            raise ConfigurationError(f"alpha={self.alpha} must be < beta={self.beta}")
        if self.alpha == 0 and self.delta <= 0:
            raise ConfigurationError("delta must be > 0 when alpha == 0")


def sample_log_uniform(params: LogUniformParams, rng: np.random.Generator) -> int:
    lo = math.log(params.alpha + params.delta)
    hi = math.log(params.beta + params.delta)
    r = rng.uniform(lo, hi)
    value = math.floor(math.exp(r) - params.delta)
    # Floating-point rounding can land exactly on beta (or alpha - 1).
    return max(params.alpha, min(params.beta - 1, value))


def log_uniform_cdf(k: int, params: LogUniformParams) -> float:
    """P(X <= k) in closed form; used as a test oracle for the sampler."""
    if k < params.alpha:
        return 0.0
    if k >= params.beta - 1:
        return 1.0
    lo = math.log(params.alpha + params.delta)
    hi = math.log(params.beta + params.delta)
    return (math.log(k + 1 + params.delta) - lo) / (hi - lo)


def problem_rng(seed: int, task: Task, difficulty: int) -> np.random.Generator:
    """Independent stream per (seed, task, difficulty)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_TASK_ID[task], difficulty))
    return np.random.Generator(np.random.PCG64(ss))


def _ulog(alpha: int, beta: int, delta: float, rng: np.random.Generator) -> int:
    return sample_log_uniform(LogUniformParams(alpha, beta, delta), rng)


def sample_problem(task: Task, difficulty: int, rng: np.random.Generator) -> Problem:
    """Draw one instance.

    difficulty means: digit count for arithmetic, sequence length for
    LCS/LPS, item count for knapsack, matrix count for MCM, and the maximum
    number of terms for sorting.
    """
    if difficulty < 1:
        raise ConfigurationError(f"difficulty must be >= 1, got {difficulty}")
    hi = 10 ** difficulty

    if task in (Task.ADD, Task.SUB, Task.MUL):
        a = _ulog(0, hi, 3, rng)
        b = _ulog(0, hi, 3, rng)
        if task is Task.SUB and a < b:
            a, b = b, a
        return Problem(task, (a, b))
    if task is Task.DIV:
        b = _ulog(1, hi, 3, rng)
        c = _ulog(0, max(hi // b, 1), 3, rng) if hi // b > 0 else 0
        r = _ulog(0, b, 3, rng) if b > 0 else 0
        return Problem(task, (b * c + r, b))
    if task is Task.COMPARE:
        return Problem(task, (_ulog(0, hi, 3, rng), _ulog(0, hi, 3, rng)))
    if task is Task.EQUAL:
        x, y = rng.integers(0, 10, size=2)
        return Problem(task, (str(x), str(y)))
    if task is Task.LCS:
        l = "".join(str(d) for d in rng.integers(0, 10, size=difficulty))
        r = "".join(str(d) for d in rng.integers(0, 10, size=difficulty))
        return Problem(task, (l, r))
    if task is Task.LPS:
        s = "".join(str(d) for d in rng.integers(0, 10, size=difficulty))
        return Problem(task, (s,))
    if task is Task.KNAPSACK:
        items = tuple(
            (int(v), int(w))
            for v, w in zip(rng.integers(1, 100, size=difficulty),
                            rng.integers(1, 100, size=difficulty))
        )
        capacity = int(rng.integers(1, sum(w for _, w in items) + 1))
        return Problem(task, (items, capacity))
    if task in (Task.TERNARY_ADD, Task.TERNARY_MUL):
        return Problem(task, tuple(_ulog(0, hi, 3, rng) for _ in range(3)))
    if task is Task.MCM:
        dims = [int(d) for d in rng.integers(1, 100, size=difficulty + 1)]
        mats = tuple((dims[i], dims[i + 1]) for i in range(difficulty))
        return Problem(task, (mats, None, None))
    if task is Task.SORT:
        if difficulty < 2:
            raise ConfigurationError("sort difficulty must be >= 2")
        k = int(rng.integers(2, difficulty + 1))
        return Problem(task, (tuple(_ulog(0, 1000, 5, rng) for _ in range(k)),))
    if task is Task.MERGE:
        l = tuple(sorted(_ulog(0, 1000, 5, rng) for _ in range(difficulty)))
        r = tuple(sorted(_ulog(0, 1000, 5, rng) for _ in range(difficulty)))
        return Problem(task, (l, r))
    raise ConfigurationError(f"unsupported task {task}")


def sample_problems(task: Task, difficulty: int, count: int, seed: int) -> list[Problem]:
    rng = problem_rng(seed, task, difficulty)
    return [sample_problem(task, difficulty, rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# Direct answers (independent of the recursive decomposition)
# ---------------------------------------------------------------------------

def _compare(a: int, b: int) -> str:
    return "LT" if a < b else ("GT" if a > b else "EQ")


def _lcs_table(l: str, r: str) -> str:
    # dp[i][j] = chosen LCS of l[:i], r[:j]; on equal branch lengths the
    # branch dropping the last character of l wins.
    dp = [["" for _ in range(len(r) + 1)] for _ in range(len(l) + 1)]
    for i in range(1, len(l) + 1):
        for j in range(1, len(r) + 1):
            if l[i - 1] == r[j - 1]:
                dp[i][j] = dp[i - 1][j - 1] + l[i - 1]
            elif len(dp[i - 1][j]) >= len(dp[i][j - 1]):
                dp[i][j] = dp[i - 1][j]
            else:
                dp[i][j] = dp[i][j - 1]
    return dp[len(l)][len(r)]


def _lps_table(s: str) -> str:
    # dp over substrings s[i:j]; on ties the branch dropping the last
    # character wins.
    n = len(s)
    if n == 0:
        return ""
    dp: dict[tuple[int, int], str] = {}
    for i in range(n + 1):
        dp[(i, i)] = ""
    for i in range(n):
        dp[(i, i + 1)] = s[i]
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            if length == 2:
                dp[(i, j)] = s[i:j] if s[i] == s[j - 1] else s[i]
            elif s[i] == s[j - 1]:
                dp[(i, j)] = s[i] + dp[(i + 1, j - 1)] + s[j - 1]
            else:
                a, b = dp[(i, j - 1)], dp[(i + 1, j)]
                dp[(i, j)] = a if len(a) >= len(b) else b
    return dp[(0, n)]


def _knapsack_table(items: tuple[tuple[int, int], ...], capacity: int):
    # Bottom-up over item suffixes; memo on remaining capacity.  The include
    # branch wins only strictly, so on value ties the exclusion is kept.
    memo: dict[tuple[int, int], tuple[tuple, int]] = {}

    def best(i: int, cap: int) -> tuple[tuple, int]:
        key = (i, cap)
        if key in memo:
            return memo[key]
        value, weight = items[i]
        if i == len(items) - 1:
            result = ((items[i],), value) if weight <= cap else ((), 0)
        else:
            excl_items, excl_value = best(i + 1, cap)
            result = (excl_items, excl_value)
            if weight <= cap:
                sub_items, sub_value = best(i + 1, cap - weight)
                if sub_value + value > excl_value:
                    result = ((items[i],) + sub_items, sub_value + value)
        memo[key] = result
        return result

    return best(0, capacity)


def _mcm_table(mats: tuple[tuple[int, int], ...]):
    # Interval DP; on cost ties the earliest split point wins, recursively.
    n = len(mats)
    cost: dict[tuple[int, int], int] = {}
    split: dict[tuple[int, int], int] = {}
    for i in range(n):
        cost[(i, i + 1)] = 0
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            best_cost, best_k = None, None
            for k in range(i + 1, j):
                c = cost[(i, k)] + cost[(k, j)] + mats[i][0] * mats[k][0] * mats[j - 1][1]
                if best_cost is None or c < best_cost:
                    best_cost, best_k = c, k
            cost[(i, j)] = best_cost
            split[(i, j)] = best_k

    def order(i: int, j: int):
        if j - i == 1:
            return mats[i]
        k = split[(i, j)]
        return (order(i, k), order(k, j))

    return order(0, n), cost[(0, n)]


def direct_answer(problem: Problem) -> Any:
    """Exact answer computed without the recursive thought procedures."""
    task, args = problem.task, problem.args
    if task is Task.ADD:
        return args[0] + args[1]
    if task is Task.SUB:
        return args[0] - args[1]
    if task is Task.MUL:
        return args[0] * args[1]
    if task is Task.DIV:
        return (args[0] // args[1], args[0] % args[1])
    if task is Task.COMPARE:
        return _compare(args[0], args[1])
    if task is Task.EQUAL:
        x, y = equal_chars(problem)
        return x == y
    if task is Task.LCS:
        s = _lcs_table(args[0], args[1])
        return (s, len(s))
    if task is Task.LPS:
        s = _lps_table(args[0])
        return (s, len(s))
    if task is Task.KNAPSACK:
        return _knapsack_table(args[0], args[1])
    if task is Task.TERNARY_ADD:
        return args[0] + args[1] + args[2]
    if task is Task.TERNARY_MUL:
        return args[0] * args[1] * args[2]
    if task is Task.MCM:
        mats, min_order, min_cost = args
        flat = mcm_flat_matrices(problem)
        order, cost = _mcm_table(flat)
        if min_cost is not None and min_cost <= cost:
            # The accumulated best from earlier splits stands (strict
            # improvement only).
            return (min_order, min_cost)
        return (order, cost)
    if task is Task.SORT:
        return tuple(sorted(args[0]))
    if task is Task.MERGE:
        return tuple(sorted(args[0] + args[1]))
    raise ConfigurationError(f"unsupported task {task}")


def equal_chars(problem: Problem) -> tuple[str, str]:
    """The two compared characters of an Equal problem.

    Equal args are normally a pair of characters, but the length-2
    palindrome base case passes its whole sequence through as one argument;
    both forms render and answer identically.
    """
    args = problem.args
    if len(args) == 1:
        seq = args[0]
        return seq[0], seq[1]
    return args[0], args[1]


def mcm_flat_matrices(problem: Problem) -> tuple[tuple[int, int], ...]:
    """The concatenated matrix chain of an MCM problem (top or mid state)."""
    mats, min_order, _ = problem.args
    if min_order is None and _is_matrix_tuple(mats):
        return mats
    l_group, r_group = mats
    return tuple(l_group) + tuple(r_group)


def mcm_groups(problem: Problem) -> tuple[tuple, tuple]:
    """The current (left, right) split groups per the decomposition rules."""
    mats, min_order, _ = problem.args
    if min_order is None:
        return mats[:1], mats[1:]
    return mats


def _is_matrix_tuple(mats) -> bool:
    return bool(mats) and isinstance(mats[0][0], int)
