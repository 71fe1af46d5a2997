import itertools
from fractions import Fraction

import pytest

from lastsuccess import brute_force_optimal, evaluate_stop_set, path_enumeration_value, solve, validate
from lastsuccess.core import IndexOutOfRange, InstanceTooLarge
from lastsuccess.oracle import all_stop_set_values

from conftest import corpus


def test_empty_set_pays_nothing(example):
    assert evaluate_stop_set(example, []) == 0


def test_last_index_only(example):
    assert evaluate_stop_set(example, [9]) == example.prob(9) * example.payoff(9)


def test_example_stopping_set_value(example):
    assert evaluate_stop_set(example, {4, 5, 7, 8, 9}) == Fraction(6721, 2000)


def test_set_members_checked(example):
    with pytest.raises(IndexOutOfRange):
        evaluate_stop_set(example, [0])
    with pytest.raises(IndexOutOfRange):
        evaluate_stop_set(example, [10])


def test_brute_force_example(example):
    best = brute_force_optimal(example)
    assert best.value == Fraction(6721, 2000)
    assert best.set == (4, 5, 7, 8, 9)


def test_brute_force_single_trial():
    best = brute_force_optimal(validate(["2/5"], [3]))
    assert best.set == (1,) and best.value == Fraction(6, 5)


def test_brute_force_tie_break_is_lexicographic():
    # p_1 = 0: including index 1 changes nothing, so {1, 2} ties with {2}
    best = brute_force_optimal(validate(["0", "1/2"], [1, 1]))
    assert best.value == Fraction(1, 2)
    assert best.set == (1, 2)


def test_brute_force_limit():
    inst = validate(["1/2"] * 23, [1] * 23)
    with pytest.raises(InstanceTooLarge):
        brute_force_optimal(inst)


@pytest.mark.parametrize("inst", corpus(seed=31, count=40, n_max=8))
def test_incremental_values_match_closed_form(inst):
    values = all_stop_set_values(inst)
    for mask, value in enumerate(values):
        members = [k for k in range(1, inst.n + 1) if mask >> (k - 1) & 1]
        assert value == evaluate_stop_set(inst, members)


@pytest.mark.parametrize("inst", corpus(seed=32, count=25, n_max=6))
def test_closed_form_matches_path_enumeration_on_every_set(inst):
    for r in range(inst.n + 1):
        for members in itertools.combinations(range(1, inst.n + 1), r):
            assert evaluate_stop_set(inst, members) == path_enumeration_value(inst, members)


@pytest.mark.parametrize("inst", corpus(seed=33, count=50))
def test_brute_force_equals_dp(inst):
    best = brute_force_optimal(inst)
    sol = solve(inst)
    assert best.value == sol.expected_profit
    assert evaluate_stop_set(inst, sol.stopping_set) == best.value


def test_brute_force_deterministic(example):
    assert brute_force_optimal(example) == brute_force_optimal(example)
