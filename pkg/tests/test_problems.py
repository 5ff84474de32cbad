import numpy as np
import pytest

from rot_lab.problems import (
    ConfigurationError,
    LogUniformParams,
    Problem,
    Task,
    direct_answer,
    equal_chars,
    log_uniform_cdf,
    mcm_flat_matrices,
    mcm_groups,
    problem_rng,
    sample_log_uniform,
    sample_problem,
    sample_problems,
)


def test_log_uniform_params_validation():
    with pytest.raises(ConfigurationError):
        LogUniformParams(5, 5, 3)
    with pytest.raises(ConfigurationError):
        LogUniformParams(0, 10, 0)
    LogUniformParams(1, 10, 0)  # alpha > 0 permits delta == 0


def test_log_uniform_range(rng):
    params = LogUniformParams(0, 1000, 3)
    values = [sample_log_uniform(params, rng) for _ in range(5000)]
    assert min(values) >= 0
    assert max(values) <= 999
    assert 0 in values  # alpha reachable with delta shift


def test_log_uniform_matches_cdf(rng):
    params = LogUniformParams(0, 10**6, 3)
    n = 20000
    values = np.array([sample_log_uniform(params, rng) for _ in range(n)])
    for k in (0, 5, 42, 999, 10**4, 10**5):
        empirical = float(np.mean(values <= k))
        expected = log_uniform_cdf(k, params)
        assert abs(empirical - expected) < 0.015, (k, empirical, expected)
    assert log_uniform_cdf(-1, params) == 0.0
    assert log_uniform_cdf(10**6, params) == 1.0


def test_digit_length_buckets_balanced(rng):
    # At difficulty 6 each operand digit count should get 5-35% of the mass.
    counts = {d: 0 for d in range(1, 7)}
    total = 0
    for _ in range(4000):
        p = sample_problem(Task.ADD, 6, rng)
        for operand in p.args:
            counts[len(str(operand))] += 1
            total += 1
    for d, count in counts.items():
        share = count / total
        assert 0.05 < share < 0.35, (d, share)


def test_sampling_reproducible():
    a = sample_problems(Task.MUL, 4, 50, seed=7)
    b = sample_problems(Task.MUL, 4, 50, seed=7)
    assert a == b
    c = sample_problems(Task.MUL, 4, 50, seed=8)
    assert a != c
    # Streams are independent per (task, difficulty).
    d = sample_problems(Task.MUL, 5, 50, seed=7)
    assert a != d


def test_sub_operands_ordered(rng):
    for _ in range(500):
        a, b = sample_problem(Task.SUB, 5, rng).args
        assert a >= b


def test_div_construction(rng):
    zero_quotient = 0
    n = 1000
    for _ in range(n):
        a, b = sample_problem(Task.DIV, 6, rng).args
        assert b >= 1
        q, r = divmod(a, b)
        assert a == q * b + r and 0 <= r < b
        zero_quotient += q == 0
    assert zero_quotient / n < 0.5


def test_knapsack_and_mcm_ranges(rng):
    for _ in range(200):
        items, capacity = sample_problem(Task.KNAPSACK, 5, rng).args
        assert len(items) == 5
        assert all(1 <= v <= 99 and 1 <= w <= 99 for v, w in items)
        assert 1 <= capacity <= sum(w for _, w in items)
    for _ in range(200):
        mats, min_order, min_cost = sample_problem(Task.MCM, 4, rng).args
        assert min_order is None and min_cost is None
        assert len(mats) == 4
        assert all(mats[i][1] == mats[i + 1][0] for i in range(3))
        assert all(1 <= d <= 99 for mat in mats for d in mat)


def test_sort_and_merge_ranges(rng):
    lengths = set()
    for _ in range(300):
        (terms,) = sample_problem(Task.SORT, 8, rng).args
        lengths.add(len(terms))
        assert all(0 <= t <= 999 for t in terms)
    assert lengths == set(range(2, 9))
    l, r = sample_problem(Task.MERGE, 4, rng).args
    assert list(l) == sorted(l) and list(r) == sorted(r)


def test_difficulty_validation(rng):
    with pytest.raises(ConfigurationError):
        sample_problem(Task.ADD, 0, rng)
    with pytest.raises(ConfigurationError):
        sample_problem(Task.SORT, 1, rng)


def test_direct_answer_basics():
    assert direct_answer(Problem(Task.ADD, (408, 351))) == 759
    assert direct_answer(Problem(Task.SUB, (432, 216))) == 216
    assert direct_answer(Problem(Task.MUL, (43, 21))) == 903
    assert direct_answer(Problem(Task.DIV, (76, 29))) == (2, 18)
    assert direct_answer(Problem(Task.COMPARE, (153, 159))) == "LT"
    assert direct_answer(Problem(Task.EQUAL, ("3", "4"))) is False
    assert direct_answer(Problem(Task.EQUAL, ("7", "7"))) is True
    assert direct_answer(Problem(Task.TERNARY_ADD, (0, 180, 135))) == 315
    assert direct_answer(Problem(Task.TERNARY_MUL, (3, 9, 5))) == 135
    assert direct_answer(Problem(Task.SORT, ((3, 1, 2),))) == (1, 2, 3)
    assert direct_answer(Problem(Task.MERGE, ((1, 5), (2, 6)))) == (1, 2, 5, 6)


def test_direct_answer_dp_tasks():
    assert direct_answer(Problem(Task.LCS, ("123", "234"))) == ("23", 2)
    assert direct_answer(Problem(Task.LPS, ("1232",))) == ("232", 3)
    items = ((3, 9), (4, 2), (9, 5))
    assert direct_answer(Problem(Task.KNAPSACK, (items, 10))) == (
        ((4, 2), (9, 5)), 13)
    mats = ((3, 9), (9, 4), (4, 5))
    assert direct_answer(Problem(Task.MCM, (mats, None, None))) == (
        (((3, 9), (9, 4)), (4, 5)), 168)


def test_equal_chars_single_argument_form():
    assert equal_chars(Problem(Task.EQUAL, ("23",))) == ("2", "3")
    assert equal_chars(Problem(Task.EQUAL, ("2", "3"))) == ("2", "3")


def test_mcm_groups_and_flattening():
    mats = ((3, 9), (9, 4), (4, 5))
    top = Problem(Task.MCM, (mats, None, None))
    assert mcm_groups(top) == (((3, 9),), ((9, 4), (4, 5)))
    assert mcm_flat_matrices(top) == mats
    mid = Problem(Task.MCM, (
        (((3, 9), (9, 4)), ((4, 5),)), ((3, 9), ((9, 4), (4, 5))), 315))
    assert mcm_groups(mid) == (((3, 9), (9, 4)), ((4, 5),))
    assert mcm_flat_matrices(mid) == mats


def test_problem_rng_streams_disjoint():
    a = problem_rng(0, Task.ADD, 2).integers(0, 1 << 30, size=4)
    b = problem_rng(0, Task.SUB, 2).integers(0, 1 << 30, size=4)
    assert not np.array_equal(a, b)
